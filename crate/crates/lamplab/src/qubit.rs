//! 2x2 complex unitary algebra: gates, the four-angle unitary family,
//! eigensystem and fixed-point classification, and Born-rule measurement.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;
use thiserror::Error;

pub type C64 = Complex64;

/// Entrywise tolerance for the unitarity and normalization invariants.
pub const UNITARY_TOL: f64 = 1e-12;
/// Default eigenvalue tolerance for fixed-point detection.
pub const FIXED_POINT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QubitError {
    #[error("matrix is not unitary: max |U^dag U - I| entry = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("state is not normalized: |amp0|^2 + |amp1|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("parameter {name} = {value} outside its range [{lo}, {hi}]")]
    ParamOutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Reduce an angle to the half-open interval (-pi, pi].
pub fn reduce_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Normalized amplitude pair over the basis {|0>, |1>}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub amp0: C64,
    pub amp1: C64,
}

impl QubitState {
    pub fn new(amp0: C64, amp1: C64) -> Result<Self, QubitError> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(QubitError::NotNormalized { norm });
        }
        Ok(Self { amp0, amp1 })
    }

    pub fn zero() -> Self {
        Self { amp0: c(1.0, 0.0), amp1: c(0.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { amp0: c(0.0, 0.0), amp1: c(1.0, 0.0) }
    }

    /// (|0> + |1>) / sqrt(2), the fixed point of the NOT operator.
    pub fn psi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: c(s, 0.0), amp1: c(s, 0.0) }
    }

    /// (|0> - |1>) / sqrt(2).
    pub fn psi_minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: c(s, 0.0), amp1: c(-s, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// Multiply by the global phase that makes the first non-negligible
    /// amplitude real and positive.
    pub fn canonicalized(&self) -> Self {
        let lead = if self.amp0.norm() > 1e-10 { self.amp0 } else { self.amp1 };
        let phase = lead.conj() / lead.norm();
        Self { amp0: self.amp0 * phase, amp1: self.amp1 * phase }
    }

    /// Equality up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        let a = self.canonicalized();
        let b = other.canonicalized();
        (a.amp0 - b.amp0).norm() <= tol && (a.amp1 - b.amp1).norm() <= tol
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }
}

impl Serialize for QubitState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [[self.amp0.re, self.amp0.im], [self.amp1.re, self.amp1.im]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QubitState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = <[[f64; 2]; 2]>::deserialize(d)?;
        QubitState::new(c(raw[0][0], raw[0][1]), c(raw[1][0], raw[1][1]))
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// 2x2 complex matrix with U^dag U = I within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    entries: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self, QubitError> {
        let u = Self { entries };
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(QubitError::NotUnitary { deviation: dev });
        }
        Ok(u)
    }

    pub(crate) fn from_entries_unchecked(entries: [[C64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        Self { entries: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]] }
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> [[C64; 2]; 2] {
        self.entries
    }

    /// Max entrywise deviation of U^dag U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let i = Self::identity();
        (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, col)| (p.entries[r][col] - i.entries[r][col]).norm())
            .fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: [
                [self.entries[0][0].conj(), self.entries[1][0].conj()],
                [self.entries[0][1].conj(), self.entries[1][1].conj()],
            ],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        Self {
            entries: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        let a = &self.entries;
        Self {
            entries: [
                [a[0][0] * factor, a[0][1] * factor],
                [a[1][0] * factor, a[1][1] * factor],
            ],
        }
    }

    pub fn apply(&self, state: &QubitState) -> QubitState {
        let a = &self.entries;
        QubitState {
            amp0: a[0][0] * state.amp0 + a[0][1] * state.amp1,
            amp1: a[1][0] * state.amp0 + a[1][1] * state.amp1,
        }
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> C64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, c)| (self.entries[r][c] - other.entries[r][c]).norm())
            .fold(0.0, f64::max)
    }
}

impl Serialize for Unitary2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a = &self.entries;
        let raw: [[[f64; 2]; 2]; 2] = [
            [[a[0][0].re, a[0][0].im], [a[0][1].re, a[0][1].im]],
            [[a[1][0].re, a[1][0].im], [a[1][1].re, a[1][1].im]],
        ];
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Unitary2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        Unitary2::new([
            [c(raw[0][0][0], raw[0][0][1]), c(raw[0][1][0], raw[0][1][1])],
            [c(raw[1][0][0], raw[1][0][1]), c(raw[1][1][0], raw[1][1][1])],
        ])
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The four angles of the two-dimensional unitary parameterization:
/// omega, beta in [-pi, pi], alpha, phi in [-pi/2, pi/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct U2Params {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl U2Params {
    pub fn new(omega: f64, alpha: f64, beta: f64, phi: f64) -> Result<Self, QubitError> {
        let check = |name, value, lo: f64, hi: f64| {
            if value < lo || value > hi {
                Err(QubitError::ParamOutOfRange { name, value, lo, hi })
            } else {
                Ok(())
            }
        };
        check("omega", omega, -PI, PI)?;
        check("alpha", alpha, -PI / 2.0, PI / 2.0)?;
        check("beta", beta, -PI, PI)?;
        check("phi", phi, -PI / 2.0, PI / 2.0)?;
        Ok(Self { omega, alpha, beta, phi })
    }
}

/// Pair of diagonal phases for diag(e^{i mu}, e^{i lambda}), reduced to (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagPhases {
    pub mu: f64,
    pub lambda: f64,
}

impl DiagPhases {
    pub fn new(mu: f64, lambda: f64) -> Self {
        Self { mu: reduce_angle(mu), lambda: reduce_angle(lambda) }
    }
}

/// Both eigenpairs of a 2x2 unitary.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub pairs: [(C64, QubitState); 2],
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> [C64; 2] {
        [self.pairs[0].0, self.pairs[1].0]
    }
}

/// The NOT operator X = [[0,1],[1,0]].
pub fn not_gate() -> Unitary2 {
    Unitary2::from_entries_unchecked([
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(1.0, 0.0), c(0.0, 0.0)],
    ])
}

/// Partial switch product X^t: the identity for even t, X for odd t.
pub fn switch_product(t: u64) -> Unitary2 {
    if t % 2 == 0 {
        Unitary2::identity()
    } else {
        not_gate()
    }
}

/// The square root of NOT: (1/2) [[1+i, 1-i], [1-i, 1+i]].
pub fn sqrt_not() -> Unitary2 {
    Unitary2::from_entries_unchecked([
        [c(0.5, 0.5), c(0.5, -0.5)],
        [c(0.5, -0.5), c(0.5, 0.5)],
    ])
}

/// The parameterized unitary
/// e^{-i beta} [[e^{i alpha} cos w, -e^{-i phi} sin w],
///              [e^{i phi} sin w,   e^{-i alpha} cos w]].
pub fn u2(params: &U2Params) -> Unitary2 {
    let U2Params { omega, alpha, beta, phi } = *params;
    let pre = C64::from_polar(1.0, -beta);
    let (sw, cw) = omega.sin_cos();
    Unitary2::from_entries_unchecked([
        [
            pre * C64::from_polar(cw, alpha),
            pre * -C64::from_polar(sw, -phi),
        ],
        [
            pre * C64::from_polar(sw, phi),
            pre * C64::from_polar(cw, -alpha),
        ],
    ])
}

/// Closed-form eigensystem of a 2x2 unitary.  Scalar matrices fall back to
/// the computational basis.  Pairs are ordered by eigenvalue: larger real
/// part first, ties by larger imaginary part.
pub fn eigensystem(u: &Unitary2) -> EigenSystem {
    let tr = u.trace();
    let det = u.det();
    let disc = (tr * tr - det.scale(4.0)).sqrt();
    let mut l1 = (tr + disc).scale(0.5);
    let mut l2 = (tr - disc).scale(0.5);
    // unit-modulus snap; eigenvalues of a unitary lie on the circle
    if l1.norm() > 1e-6 {
        l1 /= l1.norm();
    }
    if l2.norm() > 1e-6 {
        l2 /= l2.norm();
    }
    if (l1.re, l1.im) < (l2.re, l2.im) {
        std::mem::swap(&mut l1, &mut l2);
    }
    let vec_for = |lambda: C64, fallback: QubitState| -> QubitState {
        let a = u.entry(0, 0);
        let b = u.entry(0, 1);
        let cc = u.entry(1, 0);
        let d = u.entry(1, 1);
        // rows of (U - lambda I) rotated: either (b, lambda - a) or (lambda - d, c)
        let v1 = (b, lambda - a);
        let v2 = (lambda - d, cc);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        let (x, y, n) = if n1 >= n2 { (v1.0, v1.1, n1) } else { (v2.0, v2.1, n2) };
        if n < 1e-24 {
            // degenerate (scalar) matrix
            return fallback;
        }
        let inv = 1.0 / n.sqrt();
        QubitState { amp0: x * inv, amp1: y * inv }.canonicalized()
    };
    let p1 = vec_for(l1, QubitState::zero());
    let p2 = vec_for(l2, QubitState::one());
    EigenSystem { pairs: [(l1, p1), (l2, p2)] }
}

/// Eigenvectors whose eigenvalue lies within tol of +1.
pub fn fixed_points(u: &Unitary2, tol: f64) -> Vec<QubitState> {
    let one = c(1.0, 0.0);
    eigensystem(u)
        .pairs
        .iter()
        .filter(|(lambda, _)| (lambda - one).norm() <= tol)
        .map(|(_, v)| *v)
        .collect()
}

/// U2(params)^{-1} diag(e^{i mu}, e^{i lambda}) U2(params).
pub fn conjugated_diagonal(params: &U2Params, phases: &DiagPhases) -> Unitary2 {
    let u = u2(params);
    let d = Unitary2::from_entries_unchecked([
        [C64::from_polar(1.0, phases.mu), c(0.0, 0.0)],
        [c(0.0, 0.0), C64::from_polar(1.0, phases.lambda)],
    ]);
    u.adjoint().mul(&d).mul(&u)
}

/// Deterministic generator for measurement sampling.  ChaCha8 keyed by the
/// seed; independent streams come from the stream index, so parallel sampling
/// is independent of scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Born-rule measurement in the computational basis with an explicit generator.
pub fn measure_with_rng(state: &QubitState, rng: &mut impl Rng) -> (u8, QubitState) {
    let p0 = state.amp0.norm_sqr();
    if rng.random::<f64>() < p0 {
        (0, QubitState::zero())
    } else {
        (1, QubitState::one())
    }
}

/// Born-rule measurement, deterministic given the seed.
pub fn measure(state: &QubitState, seed: u64) -> (u8, QubitState) {
    let mut rng = stream_rng(seed, 0);
    measure_with_rng(state, &mut rng)
}

/// Measure n fresh copies of the state; returns (count of 0, count of 1).
pub fn sample_counts(state: &QubitState, seed: u64, n: u64) -> (u64, u64) {
    let mut rng = stream_rng(seed, 0);
    let mut zeros = 0;
    for _ in 0..n {
        if measure_with_rng(state, &mut rng).0 == 0 {
            zeros += 1;
        }
    }
    (zeros, n - zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn not_gate_acts_classically_and_involutes() {
        let x = not_gate();
        let s = x.apply(&QubitState::zero());
        assert!(s.approx_eq_up_to_phase(&QubitState::one(), 1e-15));
        assert!(x.mul(&x).max_abs_diff(&Unitary2::identity()) < 1e-15);
    }

    #[test]
    fn psi_plus_is_fixed_point_of_not() {
        let x = not_gate();
        let out = x.apply(&QubitState::psi_plus());
        assert!(out.approx_eq_up_to_phase(&QubitState::psi_plus(), 1e-15));
    }

    #[test]
    fn switch_product_parity() {
        assert_eq!(switch_product(0), Unitary2::identity());
        assert_eq!(switch_product(3), not_gate());
        for k in 0..=500u64 {
            assert_eq!(switch_product(2 * k), Unitary2::identity());
        }
    }

    #[test]
    fn sqrt_not_squares_to_not() {
        let s = sqrt_not();
        assert!(s.mul(&s).max_abs_diff(&not_gate()) < 1e-12);
        assert!(s.unitarity_deviation() < 1e-15);
        let out = s.apply(&QubitState::psi_plus());
        assert!(out.approx_eq_up_to_phase(&QubitState::psi_plus(), 1e-12));
    }

    #[test]
    fn u2_identity_parameters() {
        let u = u2(&U2Params::new(0.0, 0.0, 0.0, 0.0).unwrap());
        assert!(u.max_abs_diff(&Unitary2::identity()) < 1e-15);
    }

    #[test]
    fn u2_realizes_not_gate() {
        // omega = pi/2, alpha = 0, beta = pi/2, phi = pi/2 gives X exactly:
        // the off-diagonal entries become -e^{-i pi/2} e^{-i pi/2} = 1 and
        // e^{-i pi/2} e^{i pi/2} = 1.
        let u = u2(&U2Params::new(PI / 2.0, 0.0, PI / 2.0, PI / 2.0).unwrap());
        assert!(u.max_abs_diff(&not_gate()) < 1e-15, "{u:?}");
    }

    #[test]
    fn u2_unitary_over_parameter_grid() {
        let n = 5;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let f = |idx: usize, lo: f64, hi: f64| {
                            lo + (hi - lo) * idx as f64 / (n - 1) as f64
                        };
                        let p = U2Params::new(
                            f(i, -PI, PI),
                            f(j, -PI / 2.0, PI / 2.0),
                            f(k, -PI, PI),
                            f(l, -PI / 2.0, PI / 2.0),
                        )
                        .unwrap();
                        assert!(u2(&p).unitarity_deviation() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn u2_params_range_validation() {
        assert!(U2Params::new(4.0, 0.0, 0.0, 0.0).is_err());
        assert!(U2Params::new(0.0, 2.0, 0.0, 0.0).is_err());
        assert!(U2Params::new(0.0, 0.0, -4.0, 0.0).is_err());
        assert!(U2Params::new(0.0, 0.0, 0.0, 1.8).is_err());
    }

    #[test]
    fn eigensystem_of_not() {
        let es = eigensystem(&not_gate());
        assert_close(es.pairs[0].0, c(1.0, 0.0), 1e-12);
        assert_close(es.pairs[1].0, c(-1.0, 0.0), 1e-12);
        assert!(es.pairs[0].1.approx_eq_up_to_phase(&QubitState::psi_plus(), 1e-12));
        assert!(es.pairs[1].1.approx_eq_up_to_phase(&QubitState::psi_minus(), 1e-12));
    }

    #[test]
    fn eigensystem_of_identity_returns_basis() {
        let es = eigensystem(&Unitary2::identity());
        assert_close(es.pairs[0].0, c(1.0, 0.0), 1e-15);
        assert_close(es.pairs[1].0, c(1.0, 0.0), 1e-15);
        assert!(es.pairs[0].1.approx_eq_up_to_phase(&QubitState::zero(), 1e-15));
        assert!(es.pairs[1].1.approx_eq_up_to_phase(&QubitState::one(), 1e-15));
    }

    #[test]
    fn eigensystem_of_diagonal() {
        let (mu, lambda) = (0.7, -1.3);
        let d = conjugated_diagonal(
            &U2Params::new(0.0, 0.0, 0.0, 0.0).unwrap(),
            &DiagPhases::new(mu, lambda),
        );
        let es = eigensystem(&d);
        let want = [
            (C64::from_polar(1.0, mu), QubitState::zero()),
            (C64::from_polar(1.0, lambda), QubitState::one()),
        ];
        for (val, vec) in want {
            let found = es
                .pairs
                .iter()
                .find(|(l, _)| (l - val).norm() < 1e-12)
                .expect("eigenvalue missing");
            assert!(found.1.approx_eq_up_to_phase(&vec, 1e-12));
        }
    }

    #[test]
    fn eigensystem_reconstruction_on_random_unitaries() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..1000 {
            let p = U2Params::new(
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
            )
            .unwrap();
            let u = u2(&p);
            let es = eigensystem(&u);
            // V diag(l) V^dag
            let (l1, v1) = es.pairs[0];
            let (l2, v2) = es.pairs[1];
            let v = Unitary2::from_entries_unchecked([
                [v1.amp0, v2.amp0],
                [v1.amp1, v2.amp1],
            ]);
            let d = Unitary2::from_entries_unchecked([
                [l1, c(0.0, 0.0)],
                [c(0.0, 0.0), l2],
            ]);
            let rec = v.mul(&d).mul(&v.adjoint());
            assert!(rec.max_abs_diff(&u) < 1e-9, "params {p:?}");
            if (l1 - l2).norm() > 1e-6 {
                assert!(v1.inner(&v2).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fixed_points_of_not_is_psi_plus_only() {
        let fps = fixed_points(&not_gate(), FIXED_POINT_TOL);
        assert_eq!(fps.len(), 1);
        assert!(fps[0].approx_eq_up_to_phase(&QubitState::psi_plus(), 1e-12));
    }

    #[test]
    fn fixed_points_matches_eigensystem_on_random_unitaries() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..1000 {
            let p = U2Params::new(
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
            )
            .unwrap();
            let u = u2(&p);
            let near_one = eigensystem(&u)
                .eigenvalues()
                .iter()
                .filter(|l| (*l - c(1.0, 0.0)).norm() <= FIXED_POINT_TOL)
                .count();
            assert_eq!(fixed_points(&u, FIXED_POINT_TOL).len(), near_one);
        }
    }

    #[test]
    fn conjugated_diagonal_of_identity_phases() {
        let p = U2Params::new(0.9, 0.3, -1.1, 0.4).unwrap();
        let m = conjugated_diagonal(&p, &DiagPhases::new(0.0, 0.0));
        assert!(m.max_abs_diff(&Unitary2::identity()) < 1e-12);
    }

    #[test]
    fn conjugated_diagonal_closed_form_entries() {
        // top-left entry e^{i mu} cos^2 w + e^{i lambda} sin^2 w, etc.
        let grid = [-1.2, -0.4, 0.3, 1.5];
        for &omega in &grid {
            for &alpha in &[-0.7, 0.2, 1.1] {
                for &phi in &[-0.6, 0.0, 0.9] {
                    for &(mu, lambda) in &[(0.0, 1.3), (0.7, 1.3), (2.1, -0.5)] {
                        let p = U2Params::new(omega, alpha, 0.4, phi).unwrap();
                        let m = conjugated_diagonal(&p, &DiagPhases::new(mu, lambda));
                        let em = C64::from_polar(1.0, mu);
                        let el = C64::from_polar(1.0, lambda);
                        let (sw, cw) = omega.sin_cos();
                        let s2 = (2.0 * omega).sin();
                        let off = (el - em).scale(0.5 * s2);
                        let expect = Unitary2::from_entries_unchecked([
                            [
                                em.scale(cw * cw) + el.scale(sw * sw),
                                off * C64::from_polar(1.0, -(alpha + phi)),
                            ],
                            [
                                off * C64::from_polar(1.0, alpha + phi),
                                el.scale(cw * cw) + em.scale(sw * sw),
                            ],
                        ]);
                        assert!(m.max_abs_diff(&expect) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn conjugated_diagonal_half_turn_gives_minus_not() {
        // mu = 0, lambda = pi, omega = pi/4, alpha = phi = beta = 0:
        // the product U^dag diag(1,-1) U evaluates to [[0,-1],[-1,0]].
        let p = U2Params::new(PI / 4.0, 0.0, 0.0, 0.0).unwrap();
        let m = conjugated_diagonal(&p, &DiagPhases::new(0.0, PI));
        let minus_x = not_gate().scale(c(-1.0, 0.0));
        assert!(m.max_abs_diff(&minus_x) < 1e-12);
    }

    #[test]
    fn fixed_point_family_and_fixed_point_free_family() {
        let p = U2Params::new(0.8, 0.2, -0.5, 0.3).unwrap();
        let with_fp = conjugated_diagonal(&p, &DiagPhases::new(0.0, 1.3));
        assert_eq!(fixed_points(&with_fp, FIXED_POINT_TOL).len(), 1);
        let without = conjugated_diagonal(&p, &DiagPhases::new(0.7, 1.3));
        assert!(fixed_points(&without, FIXED_POINT_TOL).is_empty());
    }

    #[test]
    fn fixed_point_of_mu_zero_family_is_conjugated_ket0() {
        let mut rng = stream_rng(23, 0);
        for _ in 0..100 {
            let p = U2Params::new(
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI / 2.0..PI / 2.0),
            )
            .unwrap();
            let m = conjugated_diagonal(&p, &DiagPhases::new(0.0, 1.9));
            let fps = fixed_points(&m, FIXED_POINT_TOL);
            assert_eq!(fps.len(), 1);
            let expect = u2(&p).adjoint().apply(&QubitState::zero());
            assert!(fps[0].approx_eq_up_to_phase(&expect, 1e-9));
        }
    }

    #[test]
    fn measure_certain_states() {
        for seed in [0u64, 1, 42, 987654321] {
            let (o, collapsed) = measure(&QubitState::zero(), seed);
            assert_eq!(o, 0);
            assert_eq!(collapsed, QubitState::zero());
            let (o, collapsed) = measure(&QubitState::one(), seed);
            assert_eq!(o, 1);
            assert_eq!(collapsed, QubitState::one());
        }
    }

    #[test]
    fn measure_is_deterministic_given_seed() {
        let s = QubitState::psi_plus();
        assert_eq!(sample_counts(&s, 99, 1000), sample_counts(&s, 99, 1000));
        assert_ne!(sample_counts(&s, 99, 1000), sample_counts(&s, 100, 1000));
    }

    #[test]
    fn measure_frequencies_within_binomial_band() {
        let n = 100_000u64;
        let cases = [
            (QubitState::psi_plus(), 0.5),
            (QubitState::new(c(0.09f64.sqrt(), 0.0), c(0.91f64.sqrt(), 0.0)).unwrap(), 0.09),
            (QubitState::new(c(0.5, 0.0), c(0.75f64.sqrt(), 0.0)).unwrap(), 0.25),
        ];
        for (state, p) in cases {
            let (zeros, _) = sample_counts(&state, 2024, n);
            let freq = zeros as f64 / n as f64;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * sigma, "p = {p}: freq = {freq}");
        }
    }

    #[test]
    fn measure_chi_square_goodness_of_fit() {
        // chi-square with 1 dof; critical value at significance 0.001
        let crit = 10.828;
        let n = 100_000u64;
        for (state, p) in [
            (QubitState::psi_plus(), 0.5),
            (QubitState::new(c(0.5, 0.0), c(0.75f64.sqrt(), 0.0)).unwrap(), 0.25),
            (QubitState::new(c(0.3, 0.0), c(0.91f64.sqrt(), 0.0)).unwrap(), 0.09),
        ] {
            let (zeros, ones) = sample_counts(&state, 31337, n);
            let e0 = p * n as f64;
            let e1 = (1.0 - p) * n as f64;
            let chi2 = (zeros as f64 - e0).powi(2) / e0 + (ones as f64 - e1).powi(2) / e1;
            assert!(chi2 < crit, "p = {p}: chi2 = {chi2}");
        }
    }

    #[test]
    fn unitary_constructor_rejects_non_unitary() {
        let m = Unitary2::new([
            [c(1.0, 0.0), c(0.5, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(m, Err(QubitError::NotUnitary { .. })));
    }

    #[test]
    fn state_constructor_rejects_unnormalized() {
        assert!(matches!(
            QubitState::new(c(1.0, 0.0), c(0.5, 0.0)),
            Err(QubitError::NotNormalized { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = QubitState::psi_plus();
        let js = serde_json::to_string(&s).unwrap();
        let back: QubitState = serde_json::from_str(&js).unwrap();
        assert!(back.approx_eq_up_to_phase(&s, 1e-15));
        assert!(serde_json::from_str::<QubitState>("[[1.0,0.0],[0.5,0.0]]").is_err());

        let u = sqrt_not();
        let ju = serde_json::to_string(&u).unwrap();
        let back: Unitary2 = serde_json::from_str(&ju).unwrap();
        assert!(back.max_abs_diff(&u) < 1e-15);
        assert!(serde_json::from_str::<Unitary2>(
            "[[[1.0,0.0],[0.5,0.0]],[[0.0,0.0],[1.0,0.0]]]"
        )
        .is_err());
    }
}
