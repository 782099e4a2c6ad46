//! Exact complex linear algebra for one qubit: states, Bloch coordinates,
//! Pauli matrices, y-axis rotations and unitary application.
//!
//! All types are immutable values and safe to share between threads. A state
//! is a normalized pair of amplitudes `c0|0> + c1|1>`; operators are 2x2
//! unitary matrices applied by left multiplication.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Unitarity tolerance enforced at API boundaries.
pub const UNITARY_TOLERANCE: f64 = 1e-9;
/// Normalization tolerance for state construction.
pub const NORM_TOLERANCE: f64 = 1e-12;

const TWO_PI: f64 = 2.0 * PI;

/// A normalized single-qubit pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    c0: Complex64,
    c1: Complex64,
}

impl QubitState {
    /// Builds a state from raw amplitudes, rejecting non-finite or
    /// unnormalized pairs (norm tolerance `1e-12`).
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        if !(c0.re.is_finite() && c0.im.is_finite() && c1.re.is_finite() && c1.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "qubit amplitudes",
            });
        }
        let norm_sq = c0.norm_sqr() + c1.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { c0, c1 })
    }

    pub(crate) fn new_unchecked(c0: Complex64, c1: Complex64) -> Self {
        debug_assert!((c0.norm_sqr() + c1.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        Self { c0, c1 }
    }

    /// The basis state `|0>`.
    pub fn zero() -> Self {
        Self {
            c0: Complex64::new(1.0, 0.0),
            c1: Complex64::new(0.0, 0.0),
        }
    }

    /// The basis state `|1>`.
    pub fn one() -> Self {
        Self {
            c0: Complex64::new(0.0, 0.0),
            c1: Complex64::new(1.0, 0.0),
        }
    }

    /// The balanced superposition `(|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c0: Complex64::new(h, 0.0),
            c1: Complex64::new(h, 0.0),
        }
    }

    /// Amplitude of `|0>`.
    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    /// Amplitude of `|1>`.
    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    /// Born-rule probability of measuring `1`, clamped to `[0, 1]`.
    pub fn prob_one(&self) -> f64 {
        self.c1.norm_sqr().clamp(0.0, 1.0)
    }

    /// Born-rule probability of measuring `0`, clamped to `[0, 1]`.
    pub fn prob_zero(&self) -> f64 {
        self.c0.norm_sqr().clamp(0.0, 1.0)
    }

    /// Removes the global phase: `c0` becomes real and non-negative; when
    /// `c0 = 0`, `c1` becomes real and non-negative instead.
    pub fn canonical(&self) -> Self {
        let reference = if self.c0.norm_sqr() > 0.0 {
            self.c0
        } else {
            self.c1
        };
        let magnitude = reference.norm();
        if magnitude == 0.0 {
            return *self;
        }
        let phase = reference.conj() / magnitude;
        Self {
            c0: self.c0 * phase,
            c1: self.c1 * phase,
        }
    }

    /// Largest amplitude deviation between two states, ignoring global
    /// phase. `other` is rotated by the phase of the overlap before
    /// comparing, which stays stable even when one amplitude is near zero.
    pub fn distance(&self, other: &Self) -> f64 {
        let overlap = self.c0.conj() * other.c0 + self.c1.conj() * other.c1;
        let magnitude = overlap.norm();
        let phase = if magnitude == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            overlap.conj() / magnitude
        };
        let d0 = (self.c0 - other.c0 * phase).norm();
        let d1 = (self.c1 - other.c1 * phase).norm();
        d0.max(d1)
    }

    /// Extracts Bloch angles `(theta, phi)` with `theta` in `[0, pi]` and
    /// `phi` in `[0, 2pi)`. At the poles (`theta` exactly 0 or pi) `phi` is
    /// defined as 0.
    pub fn bloch(&self) -> BlochAngles {
        let r0 = self.c0.norm();
        let r1 = self.c1.norm();
        let theta = 2.0 * r1.atan2(r0);
        if r1 == 0.0 || r0 == 0.0 {
            return BlochAngles { theta, phi: 0.0 };
        }
        let mut phi = (self.c1.arg() - self.c0.arg()).rem_euclid(TWO_PI);
        if phi >= TWO_PI {
            phi = 0.0;
        }
        BlochAngles { theta, phi }
    }

    /// Builds the state `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    ///
    /// The global phase is fixed so `c0` is real and non-negative.
    pub fn from_bloch(angles: BlochAngles) -> Self {
        let half = angles.theta / 2.0;
        let c0 = Complex64::new(half.cos(), 0.0);
        let c1 = Complex64::from_polar(half.sin(), angles.phi);
        Self { c0, c1 }
    }
}

/// Bloch-sphere coordinates of a pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Validates `theta` in `[0, pi]` and `phi` in `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::NonFinite {
                context: "Bloch angles",
            });
        }
        if !(0.0..=PI).contains(&theta) || !(0.0..TWO_PI).contains(&phi) {
            return Err(Error::AnglesOutOfRange { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Polar angle in `[0, pi]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuthal angle in `[0, 2pi)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Pauli matrix axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// A 2x2 unitary operator in the `{|0>, |1>}` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2 {
    m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    /// Builds an operator from entries, rejecting matrices whose unitarity
    /// residual exceeds `1e-9`.
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Result<Self> {
        let candidate = Self {
            m: [[m00, m01], [m10, m11]],
        };
        for row in &candidate.m {
            for entry in row {
                if !(entry.re.is_finite() && entry.im.is_finite()) {
                    return Err(Error::NonFinite {
                        context: "unitary entries",
                    });
                }
            }
        }
        let residual = candidate.unitarity_residual();
        if residual > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { residual });
        }
        Ok(candidate)
    }

    #[cfg(test)]
    pub(crate) fn from_entries_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    /// The identity operator.
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// The Pauli matrix for the given axis.
    pub fn pauli(axis: PauliAxis) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let m = match axis {
            PauliAxis::X => [[zero, one], [one, zero]],
            PauliAxis::Y => [[zero, -i], [i, zero]],
            PauliAxis::Z => [[one, zero], [zero, -one]],
        };
        Self { m }
    }

    /// Rotation by `theta` about the y axis:
    /// `[[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]`.
    ///
    /// All entries are real. Panics on a non-finite angle.
    pub fn rotation_y(theta: f64) -> Self {
        assert!(theta.is_finite(), "rotation angle must be finite");
        let half = theta / 2.0;
        let c = Complex64::new(half.cos(), 0.0);
        let s = Complex64::new(half.sin(), 0.0);
        Self {
            m: [[c, -s], [s, c]],
        }
    }

    /// The Hadamard gate `(1/sqrt(2)) [[1, 1], [1, -1]]`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            m: [[h, h], [h, -h]],
        }
    }

    /// Entry at `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        let product = *self * self.dagger();
        let mut residual: f64 = 0.0;
        for row in 0..2 {
            for col in 0..2 {
                let expected = if row == col { 1.0 } else { 0.0 };
                residual = residual.max((product.m[row][col] - expected).norm());
            }
        }
        residual
    }

    /// Right-to-left product of an operator chain: the first element of
    /// `ops` is applied first. An empty list yields the identity.
    pub fn compose(ops: &[Unitary2]) -> Self {
        ops.iter().fold(Self::identity(), |total, op| *op * total)
    }

    /// Applies the operator to a state, rejecting operators whose unitarity
    /// residual exceeds `1e-9` (a corrupted operator, since every
    /// constructor checks or guarantees unitarity).
    pub fn apply(&self, state: QubitState) -> Result<QubitState> {
        let residual = self.unitarity_residual();
        if residual > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { residual });
        }
        Ok(self.apply_unchecked(state))
    }

    pub(crate) fn apply_unchecked(&self, state: QubitState) -> QubitState {
        let c0 = self.m[0][0] * state.c0 + self.m[0][1] * state.c1;
        let c1 = self.m[1][0] * state.c0 + self.m[1][1] * state.c1;
        QubitState::new_unchecked(c0, c1)
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (row, out_row) in m.iter_mut().enumerate() {
            for (col, out) in out_row.iter_mut().enumerate() {
                *out = self.m[row][0] * rhs.m[0][col] + self.m[row][1] * rhs.m[1][col];
            }
        }
        Unitary2 { m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: &Unitary2, b: &Unitary2, tol: f64) {
        for row in 0..2 {
            for col in 0..2 {
                let diff = (a.entry(row, col) - b.entry(row, col)).norm();
                assert!(
                    diff <= tol,
                    "entry ({row},{col}) differs by {diff:e}: {:?} vs {:?}",
                    a.entry(row, col),
                    b.entry(row, col)
                );
            }
        }
    }

    /// Matrix exponential of a 2x2 complex matrix by scaling and squaring
    /// with a Taylor series. Independent oracle for the rotation closed form.
    fn exp_matrix(m: [[Complex64; 2]; 2]) -> Unitary2 {
        let norm: f64 = m
            .iter()
            .flatten()
            .map(|entry| entry.norm())
            .fold(0.0, f64::max);
        let squarings = (norm.log2().ceil().max(0.0) as u32).min(40) + 4;
        let scale = 2.0_f64.powi(squarings as i32);
        let scaled = scale_matrix(m, 1.0 / scale);

        // Taylor series on the scaled matrix.
        let mut result = identity_raw();
        let mut term = identity_raw();
        for k in 1..=24 {
            term = matmul_raw(term, scaled);
            term = scale_matrix(term, 1.0 / k as f64);
            result = add_raw(result, term);
        }
        for _ in 0..squarings {
            result = matmul_raw(result, result);
        }
        Unitary2::from_entries_unchecked(result)
    }

    fn identity_raw() -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ]
    }

    fn matmul_raw(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for row in 0..2 {
            for col in 0..2 {
                m[row][col] = a[row][0] * b[0][col] + a[row][1] * b[1][col];
            }
        }
        m
    }

    fn add_raw(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut m = a;
        for row in 0..2 {
            for col in 0..2 {
                m[row][col] += b[row][col];
            }
        }
        m
    }

    fn scale_matrix(m: [[Complex64; 2]; 2], factor: f64) -> [[Complex64; 2]; 2] {
        let mut out = m;
        for row in out.iter_mut() {
            for entry in row.iter_mut() {
                *entry *= factor;
            }
        }
        out
    }

    /// `exp(-i theta sigma_y / 2)` via the series oracle.
    fn rotation_y_oracle(theta: f64) -> Unitary2 {
        let sigma_y = Unitary2::pauli(PauliAxis::Y);
        let factor = Complex64::new(0.0, -theta / 2.0);
        let mut generator = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (row, out_row) in generator.iter_mut().enumerate() {
            for (col, out) in out_row.iter_mut().enumerate() {
                *out = sigma_y.entry(row, col) * factor;
            }
        }
        exp_matrix(generator)
    }

    #[test]
    fn pauli_matrices_have_exact_entries() {
        let x = Unitary2::pauli(PauliAxis::X);
        assert_eq!(x.entry(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(x.entry(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(x.entry(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(x.entry(1, 1), Complex64::new(0.0, 0.0));

        let y = Unitary2::pauli(PauliAxis::Y);
        assert_eq!(y.entry(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(y.entry(0, 1), Complex64::new(0.0, -1.0));
        assert_eq!(y.entry(1, 0), Complex64::new(0.0, 1.0));
        assert_eq!(y.entry(1, 1), Complex64::new(0.0, 0.0));

        let z = Unitary2::pauli(PauliAxis::Z);
        assert_eq!(z.entry(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(z.entry(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(z.entry(1, 0), Complex64::new(0.0, 0.0));
        assert_eq!(z.entry(1, 1), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn pauli_y_squares_to_identity() {
        let y = Unitary2::pauli(PauliAxis::Y);
        assert_close(&(y * y), &Unitary2::identity(), 0.0);
    }

    #[test]
    fn rotation_zero_is_identity() {
        assert_eq!(Unitary2::rotation_y(0.0), Unitary2::identity());
    }

    #[test]
    fn rotation_pi_swaps_poles_with_sign() {
        let r = Unitary2::rotation_y(PI);
        let c = (PI / 2.0).cos(); // 6.1e-17, not exactly zero
        assert!(r.entry(0, 0).re.abs() <= c.abs());
        assert_eq!(r.entry(0, 1), Complex64::new(-1.0, 0.0));
        assert_eq!(r.entry(1, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rotation_quarter_turn_matches_exponential_oracle() {
        let direct = Unitary2::rotation_y(PI / 2.0);
        let expected = std::f64::consts::FRAC_1_SQRT_2;
        assert!((direct.entry(0, 0).re - expected).abs() < 1e-15);
        assert!((direct.entry(0, 1).re + expected).abs() < 1e-15);
        assert!((direct.entry(1, 0).re - expected).abs() < 1e-15);
        assert!((direct.entry(1, 1).re - expected).abs() < 1e-15);
        assert_close(&direct, &rotation_y_oracle(PI / 2.0), 1e-12);
    }

    #[test]
    fn rotation_matches_exponential_oracle_on_random_angles() {
        let mut rng = crate::seed::rng_from_seed(7);
        use rand::Rng;
        for _ in 0..100 {
            let theta = rng.random_range(-2.0 * PI..2.0 * PI);
            assert_close(
                &Unitary2::rotation_y(theta),
                &rotation_y_oracle(theta),
                1e-10,
            );
        }
    }

    #[test]
    fn hadamard_creates_balanced_superposition() {
        let h = Unitary2::hadamard();
        let plus = h.apply(QubitState::zero()).unwrap();
        assert!(plus.distance(&QubitState::plus()) < 1e-15);

        let minus = h.apply(QubitState::one()).unwrap();
        let expected = QubitState::new(
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        )
        .unwrap();
        assert!(minus.distance(&expected) < 1e-15);

        assert_close(&(h * h), &Unitary2::identity(), 1e-12);
    }

    #[test]
    fn apply_identity_returns_state_exactly() {
        let state = QubitState::from_bloch(BlochAngles::new(1.1, 0.4).unwrap());
        assert_eq!(Unitary2::identity().apply(state).unwrap(), state);
    }

    #[test]
    fn rotation_pi_maps_zero_to_one() {
        let out = Unitary2::rotation_y(PI).apply(QubitState::zero()).unwrap();
        assert_eq!(out.c1(), Complex64::new(1.0, 0.0));
        assert!(out.prob_one() == 1.0);
    }

    #[test]
    fn two_quarter_rotations_equal_one_half_rotation() {
        let quarter = Unitary2::rotation_y(PI / 2.0);
        let stepwise = quarter
            .apply(quarter.apply(QubitState::zero()).unwrap())
            .unwrap();
        let direct = Unitary2::rotation_y(PI).apply(QubitState::zero()).unwrap();
        assert!(stepwise.distance(&direct) < 1e-12);
    }

    #[test]
    fn apply_rejects_corrupted_operator() {
        let two = Complex64::new(2.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let corrupted = Unitary2::from_entries_unchecked([[two, zero], [zero, two]]);
        match corrupted.apply(QubitState::zero()) {
            Err(Error::NotUnitary { residual }) => assert!(residual > 1e-9),
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn constructor_rejects_non_unitary_matrix() {
        let err = Unitary2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!(matches!(err, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn state_constructor_rejects_bad_amplitudes() {
        let err = QubitState::new(Complex64::new(0.9, 0.0), Complex64::new(0.9, 0.0));
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
        let err = QubitState::new(Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0));
        assert!(matches!(err, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn compose_empty_list_is_identity() {
        assert_eq!(Unitary2::compose(&[]), Unitary2::identity());
    }

    #[test]
    fn compose_single_operator_is_itself() {
        let r = Unitary2::rotation_y(PI / 4.0);
        assert_eq!(Unitary2::compose(&[r]), r);
    }

    #[test]
    fn compose_three_twelfths_equals_quarter() {
        let twelfth = Unitary2::rotation_y(PI / 12.0);
        let composed = Unitary2::compose(&[twelfth, twelfth, twelfth]);
        assert_close(&composed, &Unitary2::rotation_y(PI / 4.0), 1e-12);
    }

    #[test]
    fn compose_applies_right_to_left() {
        // H then rotation: compose([h, r]) must equal r * h.
        let h = Unitary2::hadamard();
        let r = Unitary2::rotation_y(0.3);
        assert_close(&Unitary2::compose(&[h, r]), &(r * h), 0.0);
    }

    #[test]
    fn bloch_of_basis_and_plus_states() {
        let zero = QubitState::zero().bloch();
        assert_eq!(zero.theta(), 0.0);
        assert_eq!(zero.phi(), 0.0);

        let plus = QubitState::plus().bloch();
        assert!((plus.theta() - PI / 2.0).abs() < 1e-15);
        assert_eq!(plus.phi(), 0.0);

        let one = QubitState::one().bloch();
        assert!((one.theta() - PI).abs() < 1e-15);
        assert_eq!(one.phi(), 0.0);
    }

    #[test]
    fn eighth_turn_state_has_expected_amplitudes() {
        let state = QubitState::from_bloch(BlochAngles::new(PI / 4.0, 0.0).unwrap());
        assert!((state.c0().re - (PI / 8.0).cos()).abs() < 1e-15);
        assert!((state.c1().re - (PI / 8.0).sin()).abs() < 1e-15);
        assert_eq!(state.c0().im, 0.0);
        assert_eq!(state.c1().im, 0.0);
    }

    #[test]
    fn bloch_angles_validate_ranges() {
        assert!(BlochAngles::new(-0.1, 0.0).is_err());
        assert!(BlochAngles::new(PI + 0.1, 0.0).is_err());
        assert!(BlochAngles::new(1.0, TWO_PI).is_err());
        assert!(BlochAngles::new(1.0, -0.5).is_err());
        assert!(BlochAngles::new(PI, 0.0).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rotation_additivity(a in -TWO_PI..TWO_PI, b in -TWO_PI..TWO_PI) {
            let product = Unitary2::rotation_y(a) * Unitary2::rotation_y(b);
            assert_close(&product, &Unitary2::rotation_y(a + b), 1e-12);
        }

        #[test]
        fn bloch_round_trip_up_to_global_phase(
            theta in 0.0..PI,
            phi in 0.0..TWO_PI,
            global in 0.0..TWO_PI,
        ) {
            let state = QubitState::from_bloch(BlochAngles::new(theta, phi).unwrap());
            let rotated = QubitState::new_unchecked(
                state.c0() * Complex64::from_polar(1.0, global),
                state.c1() * Complex64::from_polar(1.0, global),
            );
            let round = QubitState::from_bloch(rotated.bloch());
            prop_assert!(round.distance(&state) < 1e-12);
        }

        #[test]
        fn chained_rotations_preserve_norm(angles in proptest::collection::vec(-PI..PI, 1..40)) {
            let ops: Vec<Unitary2> = angles.iter().map(|&a| Unitary2::rotation_y(a)).collect();
            let total = Unitary2::compose(&ops);
            prop_assert!(total.unitarity_residual() < 1e-12);
            let state = total.apply(QubitState::plus()).unwrap();
            let norm_sq = state.c0().norm_sqr() + state.c1().norm_sqr();
            prop_assert!((norm_sq - 1.0).abs() < 1e-12);
        }
    }
}
