//! The standing corpus of example algebras.

use super::{Algebra, AlgebraError, ScalarMode};
use crate::free::FreeAlgebra;
use crate::scalar::Rat;
use num_traits::{One, Zero};

/// Presets stay within desk scale: End(A) of a dim-50 algebra is the
/// largest coordinate space the exact engines are meant to handle.
pub const MAX_PRESET_DIM: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    DualNumbers,
    TruncatedPoly {
        vars: usize,
        max_degree: usize,
    },
    TruncatedFree {
        generators: usize,
        max_degree: usize,
    },
    MatrixAlgebra {
        n: usize,
    },
    UpperTriangular {
        n: usize,
    },
}

impl Preset {
    pub fn parse(name: &str, params: &[i64]) -> Result<Preset, AlgebraError> {
        let two = |what: &str| -> Result<(usize, usize), AlgebraError> {
            if params.len() != 2 || params.iter().any(|&p| p < 0) {
                return Err(AlgebraError::UnsupportedPreset {
                    detail: format!("{what} takes two non-negative parameters, got {params:?}"),
                });
            }
            Ok((params[0] as usize, params[1] as usize))
        };
        let one = |what: &str| -> Result<usize, AlgebraError> {
            if params.len() != 1 || params[0] < 1 {
                return Err(AlgebraError::UnsupportedPreset {
                    detail: format!("{what} takes one positive parameter, got {params:?}"),
                });
            }
            Ok(params[0] as usize)
        };
        match name {
            "dual_numbers" => {
                if params.is_empty() {
                    Ok(Preset::DualNumbers)
                } else {
                    Err(AlgebraError::UnsupportedPreset {
                        detail: "dual_numbers takes no parameters".into(),
                    })
                }
            }
            "truncated_poly" => {
                let (vars, max_degree) = two("truncated_poly")?;
                Ok(Preset::TruncatedPoly { vars, max_degree })
            }
            "truncated_free" => {
                let (generators, max_degree) = two("truncated_free")?;
                Ok(Preset::TruncatedFree {
                    generators,
                    max_degree,
                })
            }
            "matrix_algebra" => Ok(Preset::MatrixAlgebra {
                n: one("matrix_algebra")?,
            }),
            "upper_triangular" => Ok(Preset::UpperTriangular {
                n: one("upper_triangular")?,
            }),
            other => Err(AlgebraError::UnsupportedPreset {
                detail: format!("unknown preset '{other}'"),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::DualNumbers => "dual_numbers",
            Preset::TruncatedPoly { .. } => "truncated_poly",
            Preset::TruncatedFree { .. } => "truncated_free",
            Preset::MatrixAlgebra { .. } => "matrix_algebra",
            Preset::UpperTriangular { .. } => "upper_triangular",
        }
    }

    pub fn params(&self) -> Vec<i64> {
        match *self {
            Preset::DualNumbers => vec![],
            Preset::TruncatedPoly { vars, max_degree } => vec![vars as i64, max_degree as i64],
            Preset::TruncatedFree {
                generators,
                max_degree,
            } => vec![generators as i64, max_degree as i64],
            Preset::MatrixAlgebra { n } => vec![n as i64],
            Preset::UpperTriangular { n } => vec![n as i64],
        }
    }

    pub fn build(&self, mode: ScalarMode) -> Result<Algebra, AlgebraError> {
        let algebra = match *self {
            Preset::DualNumbers => truncated_poly(1, 1, mode)?,
            Preset::TruncatedPoly { vars, max_degree } => {
                if !(1..=2).contains(&vars) {
                    return Err(AlgebraError::UnsupportedPreset {
                        detail: format!("truncated_poly supports 1 or 2 variables, got {vars}"),
                    });
                }
                truncated_poly(vars, max_degree, mode)?
            }
            Preset::TruncatedFree {
                generators,
                max_degree,
            } => {
                if generators == 0 {
                    return Err(AlgebraError::UnsupportedPreset {
                        detail: "truncated_free needs at least one generator".into(),
                    });
                }
                let free =
                    FreeAlgebra::new(generator_names(generators), max_degree).map_err(|e| {
                        AlgebraError::UnsupportedPreset {
                            detail: e.to_string(),
                        }
                    })?;
                check_dim(free.word_count())?;
                free.to_structure_algebra(mode)?
            }
            Preset::MatrixAlgebra { n } => {
                matrix_units(n, n * n, mode, |i, j| i * n + j, |_, _| true)?
            }
            Preset::UpperTriangular { n } => {
                // Basis E_ij with i <= j, ordered row-major: (E11, E12, ..., E22, ...).
                let mut index = vec![vec![usize::MAX; n]; n];
                let mut count = 0;
                for i in 0..n {
                    for j in i..n {
                        index[i][j] = count;
                        count += 1;
                    }
                }
                matrix_units(n, count, mode, move |i, j| index[i][j], |i, j| i <= j)?
            }
        };
        Ok(algebra)
    }
}

fn check_dim(dim: usize) -> Result<(), AlgebraError> {
    if dim > MAX_PRESET_DIM {
        return Err(AlgebraError::UnsupportedPreset {
            detail: format!("preset dimension {dim} exceeds the desk-scale cap {MAX_PRESET_DIM}"),
        });
    }
    Ok(())
}

/// Generator names used by free presets and the word syntax: x, y, z, then x1, x2, ...
pub fn generator_names(count: usize) -> Vec<String> {
    if count <= 3 {
        ["x", "y", "z"]
            .iter()
            .take(count)
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

/// k[X]/(X^{D+1}) or k[X,Y]/(monomials of degree > D), monomials ordered by
/// (total degree, lexicographic on the word), e.g. 1, X, Y, X², XY, Y².
fn truncated_poly(
    vars: usize,
    max_degree: usize,
    mode: ScalarMode,
) -> Result<Algebra, AlgebraError> {
    let mut monomials: Vec<(usize, usize)> = Vec::new();
    for deg in 0..=max_degree {
        if vars == 1 {
            monomials.push((deg, 0));
        } else {
            for a in (0..=deg).rev() {
                monomials.push((a, deg - a));
            }
        }
    }
    let dim = monomials.len();
    check_dim(dim)?;
    let index_of = |m: (usize, usize)| monomials.iter().position(|&x| x == m);
    let labels: Vec<String> = monomials
        .iter()
        .map(|&(a, b)| monomial_label(a, b))
        .collect();
    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for (i, &(a1, b1)) in monomials.iter().enumerate() {
        for (j, &(a2, b2)) in monomials.iter().enumerate() {
            let m = (a1 + a2, b1 + b2);
            if m.0 + m.1 <= max_degree {
                let k = index_of(m).expect("product monomial below the degree bound");
                table[i][j][k] = Rat::one();
            }
        }
    }
    let mut unit = vec![Rat::zero(); dim];
    unit[0] = Rat::one();
    Algebra::new(labels, table, unit, mode)
}

fn monomial_label(a: usize, b: usize) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("X".to_string()),
        _ => parts.push(format!("X^{a}")),
    }
    match b {
        0 => {}
        1 => parts.push("Y".to_string()),
        _ => parts.push(format!("Y^{b}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Algebras spanned by matrix units E_ij (full n×n or a filtered subset),
/// with E_ij·E_kl = δ_jk E_il.
fn matrix_units(
    n: usize,
    dim: usize,
    mode: ScalarMode,
    index: impl Fn(usize, usize) -> usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<Algebra, AlgebraError> {
    check_dim(dim)?;
    let mut labels = vec![String::new(); dim];
    let mut pairs = Vec::with_capacity(dim);
    for i in 0..n {
        for j in 0..n {
            if keep(i, j) {
                labels[index(i, j)] = format!("E{}{}", i + 1, j + 1);
                pairs.push((i, j));
            }
        }
    }
    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            if j == k && keep(i, l) {
                table[index(i, j)][index(k, l)][index(i, l)] = Rat::one();
            }
        }
    }
    let mut unit = vec![Rat::zero(); dim];
    for i in 0..n {
        unit[index(i, i)] = Rat::one();
    }
    Algebra::new(labels, table, unit, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_dimensions() {
        assert_eq!(
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2
            }
            .build(ScalarMode::Rational)
            .unwrap()
            .dim(),
            7
        );
        assert_eq!(
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2
            }
            .build(ScalarMode::Rational)
            .unwrap()
            .dim(),
            6
        );
        let m2 = Preset::MatrixAlgebra { n: 2 }
            .build(ScalarMode::Rational)
            .unwrap();
        assert_eq!(m2.dim(), 4);
        assert!(!m2.is_commutative());
    }

    #[test]
    fn truncated_poly_two_vars_order() {
        let a = Preset::TruncatedPoly {
            vars: 2,
            max_degree: 2,
        }
        .build(ScalarMode::Rational)
        .unwrap();
        assert_eq!(a.labels(), &["1", "X", "Y", "X^2", "X*Y", "Y^2"]);
        assert!(a.is_commutative());
        assert!(a.validate().is_empty());
    }

    #[test]
    fn all_presets_validate() {
        let presets = [
            Preset::DualNumbers,
            Preset::TruncatedPoly {
                vars: 1,
                max_degree: 4,
            },
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2,
            },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 3,
            },
            Preset::MatrixAlgebra { n: 3 },
            Preset::UpperTriangular { n: 3 },
        ];
        for p in presets {
            let a = p.build(ScalarMode::Rational).unwrap();
            assert!(a.validate().is_empty(), "{p:?} failed validation");
            let z = p.build(ScalarMode::Integer).unwrap();
            assert!(z.validate().is_empty());
        }
    }

    #[test]
    fn parse_round_trip() {
        let p = Preset::parse("truncated_free", &[2, 3]).unwrap();
        assert_eq!(
            p,
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 3
            }
        );
        assert_eq!(Preset::parse(p.name(), &p.params()).unwrap(), p);
        assert!(Preset::parse("nope", &[]).is_err());
        assert!(Preset::parse("matrix_algebra", &[0]).is_err());
        assert!(Preset::parse("truncated_poly", &[3, 2])
            .unwrap()
            .build(ScalarMode::Rational)
            .is_err());
    }

    #[test]
    fn oversized_presets_are_rejected() {
        assert!(Preset::MatrixAlgebra { n: 8 }
            .build(ScalarMode::Rational)
            .is_err());
        assert!(Preset::TruncatedFree {
            generators: 2,
            max_degree: 5
        }
        .build(ScalarMode::Rational)
        .is_err());
    }
}
