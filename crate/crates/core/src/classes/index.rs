//! Index arithmetic for punctured holomorphic curves in a symplectic cut.

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctureSign {
    Positive,
    Negative,
}

/// Asymptotic orbit data: Conley-Zehnder index and dimension of the
/// Morse-Bott family it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Puncture {
    pub sign: PunctureSign,
    pub cz: i64,
    pub family_dim: i64,
}

impl Puncture {
    pub fn positive(cz: i64, family_dim: i64) -> Self {
        Puncture { sign: PunctureSign::Positive, cz, family_dim }
    }

    pub fn negative(cz: i64, family_dim: i64) -> Self {
        Puncture { sign: PunctureSign::Negative, cz, family_dim }
    }
}

/// Euler characteristic of a genus `g` surface with `punctures` punctures
/// and `boundary` boundary circles.
pub fn euler_characteristic(genus: i64, punctures: i64, boundary: i64) -> i64 {
    2 - 2 * genus - punctures - boundary
}

/// Fredholm index in complex dimension `n`:
/// `(n-3)χ + 2c1 + Σ⁺(μ_CZ + dim/2) - Σ⁻(μ_CZ - dim/2)`.
///
/// Half-dimensional family terms can be fractional in isolation, so the sum is
/// kept exact.
pub fn fredholm_index(n: i64, chi: i64, c1: i64, punctures: &[Puncture]) -> Rational {
    let half = |d: i64| Rational::new(d.into(), 2.into());
    let mut ind = Rational::from_integer(((n - 3) * chi + 2 * c1).into());
    for p in punctures {
        let cz = Rational::from_integer(p.cz.into());
        match p.sign {
            PunctureSign::Positive => ind += cz + half(p.family_dim),
            PunctureSign::Negative => ind -= cz - half(p.family_dim),
        }
    }
    ind
}

/// Normal Chern number, `(ind - 2 + 2g + #Γ₀ + #∂-components) / 2`.
pub fn normal_chern(ind: &Rational, genus: i64, even_punctures: i64, boundary_components: i64) -> Rational {
    let shift = Rational::from_integer((-2 + 2 * genus + even_punctures + boundary_components).into());
    (ind + shift) / Rational::from_integer(2.into())
}

/// Automatic transversality: `ind > c_N + Z(du)`.
pub fn at_check(ind: &Rational, c_n: &Rational, z_du: i64) -> bool {
    ind > &(c_n + Rational::from_integer(z_du.into()))
}
