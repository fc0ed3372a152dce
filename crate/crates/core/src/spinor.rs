//! Dirac algebra in the Bjorken–Drell representation.
//!
//! Four-vectors carry contravariant components `(E/c, p1, p2, p3)` in momentum
//! units with metric (+,−,−,−); masses enter as `mc`. Spinors are normalized to
//! ūu = 1.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::units::Helicity;
use crate::{Error, Result};

/// Relative tolerance on q0 and q3 for elastic kinematics.
pub const ELASTIC_TOL: f64 = 1e-8;
/// Relative tolerance on the mass shell.
pub const ON_SHELL_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl FourVector {
    pub const fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { t, x1, x2, x3 }
    }

    /// Positive-energy on-shell momentum with spatial part `p`.
    pub fn on_shell(mc: f64, p: [f64; 3]) -> Self {
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        Self::new(libm::sqrt(mc * mc + p2), p[0], p[1], p[2])
    }

    /// Minkowski product.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x1 * other.x1 - self.x2 * other.x2 - self.x3 * other.x3
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn spatial_norm(&self) -> f64 {
        libm::sqrt(self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3)
    }

    /// Rotation about the x3 axis.
    pub fn rotate_x3(&self, angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Self::new(
            self.t,
            c * self.x1 - s * self.x2,
            s * self.x1 + c * self.x2,
            self.x3,
        )
    }

    fn check_on_shell(&self, mc: f64) -> Result<()> {
        if !(mc.is_finite() && mc > 0.0) {
            return Err(Error::ZeroMass);
        }
        let residual = libm::fabs(self.dot(self) - mc * mc) / (self.t * self.t);
        if self.t > 0.0 && residual <= ON_SHELL_TOL {
            Ok(())
        } else {
            Err(Error::OffShell { residual })
        }
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        FourVector::new(self * v.t, self * v.x1, self * v.x2, self * v.x3)
    }
}

/// 4×4 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[Complex64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[ZERO; 4]; 4]);

    pub fn identity() -> Self {
        Self::diagonal([ONE; 4])
    }

    pub fn diagonal(d: [Complex64; 4]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Block matrix from 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: Pauli, b: Pauli, c: Pauli, d: Pauli) -> Self {
        let mut m = Self::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j];
                m.0[i][j + 2] = b.0[i][j];
                m.0[i + 2][j] = c.0[i][j];
                m.0[i + 2][j + 2] = d.0[i][j];
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, o: Matrix4) -> Matrix4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, o: Matrix4) -> Matrix4 {
        self + o.scale(-ONE)
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, o: Matrix4) -> Matrix4 {
        let mut m = Matrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        m
    }
}

/// 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pauli(pub [[Complex64; 2]; 2]);

impl Pauli {
    pub const ZERO: Pauli = Pauli([[ZERO; 2]; 2]);
    pub const IDENTITY: Pauli = Pauli([[ONE, ZERO], [ZERO, ONE]]);
    pub const X: Pauli = Pauli([[ZERO, ONE], [ONE, ZERO]]);
    pub const Y: Pauli = Pauli([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    pub const Z: Pauli = Pauli([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    /// σ·n for a real 3-vector n.
    pub fn dot(n: [f64; 3]) -> Pauli {
        let mut m = Pauli::ZERO;
        for (s, c) in [Pauli::X, Pauli::Y, Pauli::Z].iter().zip(n) {
            for i in 0..2 {
                for j in 0..2 {
                    m.0[i][j] += s.0[i][j] * c;
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }
}

/// γ⁰..γ³ in a fixed representation.
impl Neg for Pauli {
    type Output = Pauli;
    fn neg(mut self) -> Pauli {
        self.0.iter_mut().flatten().for_each(|z| *z = -*z);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    pub gamma: [Matrix4; 4],
}

impl GammaSet {
    pub fn bjorken_drell() -> Self {
        let g0 = Matrix4::from_blocks(Pauli::IDENTITY, Pauli::ZERO, Pauli::ZERO, -Pauli::IDENTITY);
        let gk = |s: Pauli| Matrix4::from_blocks(Pauli::ZERO, s, -s, Pauli::ZERO);
        Self {
            gamma: [g0, gk(Pauli::X), gk(Pauli::Y), gk(Pauli::Z)],
        }
    }

    pub fn identity(&self) -> Matrix4 {
        Matrix4::identity()
    }

    /// {γ^μ, γ^ν} − 2 g^{μν}·1, largest entry.
    pub fn anticommutator_residual(&self, mu: usize, nu: usize) -> f64 {
        let (a, b) = (self.gamma[mu], self.gamma[nu]);
        let metric = match (mu, nu) {
            (0, 0) => 1.0,
            (m, n) if m == n => -1.0,
            _ => 0.0,
        };
        (a * b + b * a - Matrix4::identity().scale(Complex64::new(2.0 * metric, 0.0))).max_abs()
    }
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::bjorken_drell()
    }
}

/// v̸ = v_μ γ^μ.
pub fn slash(v: &FourVector, g: &GammaSet) -> Matrix4 {
    let c = |x: f64| Complex64::new(x, 0.0);
    g.gamma[0].scale(c(v.t))
        - g.gamma[1].scale(c(v.x1))
        - g.gamma[2].scale(c(v.x2))
        - g.gamma[3].scale(c(v.x3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinLabel {
    Spin(Spin),
    Helicity(Helicity),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinor {
    pub components: [Complex64; 4],
    pub momentum: FourVector,
    pub label: SpinLabel,
}

impl DiracSpinor {
    /// ū = u†γ⁰ (Bjorken–Drell).
    pub fn bar(&self) -> [Complex64; 4] {
        let c = self.components;
        [c[0].conj(), c[1].conj(), -c[2].conj(), -c[3].conj()]
    }

    /// ūu.
    pub fn scalar_norm(&self) -> f64 {
        self.bar()
            .iter()
            .zip(&self.components)
            .map(|(a, b)| a * b)
            .sum::<Complex64>()
            .re
    }

    /// u†u.
    pub fn density(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self-bar · m · right`.
    pub fn sandwich(&self, m: &Matrix4, right: &DiracSpinor) -> Complex64 {
        let mu = m.apply(&right.components);
        self.bar().iter().zip(&mu).map(|(a, b)| a * b).sum()
    }

    pub fn upper(&self) -> [Complex64; 2] {
        [self.components[0], self.components[1]]
    }
}

fn boosted(p: &FourVector, mc: f64, chi: [Complex64; 2], label: SpinLabel) -> DiracSpinor {
    let e_plus_m = p.t + mc;
    let norm = libm::sqrt(e_plus_m / (2.0 * mc));
    let lower = Pauli::dot(p.spatial()).apply(&chi);
    DiracSpinor {
        components: [
            chi[0] * norm,
            chi[1] * norm,
            lower[0] * (norm / e_plus_m),
            lower[1] * (norm / e_plus_m),
        ],
        momentum: *p,
        label,
    }
}

/// Positive-energy spinor with spin quantized along x3 in the rest frame.
pub fn free_spinor(p: &FourVector, mc: f64, spin: Spin) -> Result<DiracSpinor> {
    p.check_on_shell(mc)?;
    let chi = match spin {
        Spin::Up => [ONE, ZERO],
        Spin::Down => [ZERO, ONE],
    };
    Ok(boosted(p, mc, chi, SpinLabel::Spin(spin)))
}

/// Positive-energy spinor with spin projection λ/2 along p.
pub fn helicity_spinor(p: &FourVector, mc: f64, helicity: Helicity) -> Result<DiracSpinor> {
    p.check_on_shell(mc)?;
    let norm = p.spatial_norm();
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::ZeroSpatialMomentum);
    }
    let cos_beta = (p.x3 / norm).clamp(-1.0, 1.0);
    let half_beta = 0.5 * libm::acos(cos_beta);
    let phi = libm::atan2(p.x2, p.x1);
    let (c, s) = (libm::cos(half_beta), libm::sin(half_beta));
    let chi = match helicity {
        Helicity::Plus => [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)],
        Helicity::Minus => [-Complex64::from_polar(s, -phi), Complex64::new(c, 0.0)],
    };
    Ok(boosted(p, mc, chi, SpinLabel::Helicity(helicity)))
}

/// The in-plane vector ẑ × q = (0, −q2, q1, 0) actually contracted with γ in
/// the solenoid amplitude (ε_ij3 q_i γ^j).
pub fn transverse_transfer(p_i: &FourVector, p_f: &FourVector) -> FourVector {
    let q = *p_f - *p_i;
    FourVector::new(0.0, -q.x2, q.x1, 0.0)
}

fn check_elastic(p_i: &FourVector, p_f: &FourVector) -> Result<()> {
    let q = *p_f - *p_i;
    let scale = p_i.t.max(p_f.t);
    let (q0, q3) = (libm::fabs(q.t) / scale, libm::fabs(q.x3) / scale);
    if q0 <= ELASTIC_TOL && q3 <= ELASTIC_TOL {
        Ok(())
    } else {
        Err(Error::NotElastic { q0, q3 })
    }
}

/// Three evaluations of the spin-averaged squared current
/// (1/2) Σ_{s_i} Σ_{s_f} |ū_f k̸ u_i|² with k = ẑ × q, in the covariant
/// normalization ūu = 2mc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSum {
    /// Explicit sum over Bjorken–Drell spinors, rescaled by (2mc)².
    pub explicit: f64,
    /// Trace identity 2[k²(m²c² − p_f·p_i) + 2(p_i·k)(p_f·k)].
    pub invariant: f64,
    /// 16 p⊥⁴ sin²(φ/2), φ the angle between the transverse momenta.
    pub kinematic: f64,
}

impl SpinSum {
    pub fn value(&self) -> f64 {
        self.explicit
    }

    /// Largest pairwise relative difference among the three evaluations.
    pub fn max_rel_disagreement(&self) -> f64 {
        let vals = [self.explicit, self.invariant, self.kinematic];
        let scale = vals.iter().map(|v| libm::fabs(*v)).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in a + 1..3 {
                worst = worst.max(libm::fabs(vals[a] - vals[b]) / scale);
            }
        }
        worst
    }
}

pub fn current_sq_avg(p_i: &FourVector, p_f: &FourVector, mc: f64) -> Result<SpinSum> {
    p_i.check_on_shell(mc)?;
    p_f.check_on_shell(mc)?;
    check_elastic(p_i, p_f)?;
    let g = GammaSet::bjorken_drell();
    let k = transverse_transfer(p_i, p_f);
    let k_slash = slash(&k, &g);

    let mut sum = 0.0;
    for si in [Spin::Up, Spin::Down] {
        let ui = free_spinor(p_i, mc, si)?;
        for sf in [Spin::Up, Spin::Down] {
            let uf = free_spinor(p_f, mc, sf)?;
            sum += uf.sandwich(&k_slash, &ui).norm_sqr();
        }
    }
    let explicit = 0.5 * sum * (2.0 * mc) * (2.0 * mc);

    let invariant = 2.0 * (k.dot(&k) * (mc * mc - p_f.dot(p_i)) + 2.0 * p_i.dot(&k) * p_f.dot(&k));

    let perp_i = libm::hypot(p_i.x1, p_i.x2);
    let phi = libm::atan2(
        p_i.x1 * p_f.x2 - p_i.x2 * p_f.x1,
        p_i.x1 * p_f.x1 + p_i.x2 * p_f.x2,
    );
    let s = libm::sin(0.5 * phi);
    let kinematic = 16.0 * perp_i * perp_i * perp_i * perp_i * s * s;

    Ok(SpinSum {
        explicit,
        invariant,
        kinematic,
    })
}

/// (1 + λi λf)².
pub fn helicity_factor(lambda_i: i32, lambda_f: i32) -> Result<f64> {
    let li = Helicity::try_from(lambda_i)?.sign();
    let lf = Helicity::try_from(lambda_f)?.sign();
    Ok((1.0 + li * lf) * (1.0 + li * lf))
}

/// (1/2) Σ_{s_i} Σ_{s_f} |ū_f γ¹ u_i|² in the ūu = 1 normalization, by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformCurrent {
    /// Explicit sum over spinors.
    pub explicit: f64,
    /// Tr[(p̸_f + mc) γ¹ (p̸_i + mc) γ¹] / (8 m²c²) from matrix products.
    pub trace: f64,
}

impl UniformCurrent {
    pub fn rel_disagreement(&self) -> f64 {
        let scale = libm::fabs(self.explicit).max(libm::fabs(self.trace));
        if scale == 0.0 {
            0.0
        } else {
            libm::fabs(self.explicit - self.trace) / scale
        }
    }
}

pub fn current_sq_uniform(p_i: &FourVector, p_f: &FourVector, mc: f64) -> Result<UniformCurrent> {
    p_i.check_on_shell(mc)?;
    p_f.check_on_shell(mc)?;
    let g = GammaSet::bjorken_drell();
    let g1 = g.gamma[1];

    let mut sum = 0.0;
    for si in [Spin::Up, Spin::Down] {
        let ui = free_spinor(p_i, mc, si)?;
        for sf in [Spin::Up, Spin::Down] {
            let uf = free_spinor(p_f, mc, sf)?;
            sum += uf.sandwich(&g1, &ui).norm_sqr();
        }
    }

    let m = Matrix4::identity().scale(Complex64::new(mc, 0.0));
    let product = (slash(p_f, &g) + m) * g1 * (slash(p_i, &g) + m) * g1;
    Ok(UniformCurrent {
        explicit: 0.5 * sum,
        trace: product.trace().re / (8.0 * mc * mc),
    })
}
