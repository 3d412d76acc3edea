//! Algebra spec files (TOML).
//!
//! ```toml
//! [braiding]
//! q = [["z(3)", "z(3)^2"], ["1", "z(3)"]]
//!
//! [realization]          # optional; derived from q when absent
//! group = [3, 3]
//! g = [[1, 0], [0, 1]]
//! chi = [["z(3)", "1"], ["z(3)^2", "z(3)"]]
//!
//! [lie]                  # optional; exactly one of torus / maps / biderivations
//! torus = [[1, 0]]
//! central = 0            # extra central elements acting by zero
//!
//! [ideal]                # optional pre-Nichols generators
//! generators = ["x1*x1*x1"]
//!
//! [run]
//! cap = 6
//! suites = ["hopf"]
//! ```

use nichols_core::braided_space::{
    biderivation_algebra, derive_realization, lie_algebra_of_maps, torus_lie_algebra, AbelianGroup,
    Character, DiagonalBraiding, EndV, GroupElement, LieAction, YDRealization,
};
use nichols_core::scalars::{parse_scalar, CycScalar, RootOfUnity};
use nichols_core::tensor_algebra::{parse_element, TensorElement};
use serde::Deserialize;
use toml::{Spanned, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    braiding: RawBraiding,
    realization: Option<RawRealization>,
    lie: Option<RawLie>,
    ideal: Option<RawIdeal>,
    run: Option<RawRun>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBraiding {
    q: Spanned<Vec<Vec<Spanned<Value>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRealization {
    group: Spanned<Vec<u32>>,
    g: Spanned<Vec<Vec<u32>>>,
    chi: Spanned<Vec<Vec<Spanned<Value>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLie {
    torus: Option<Vec<Vec<Spanned<Value>>>>,
    maps: Option<Vec<Vec<Vec<Spanned<Value>>>>>,
    biderivations: Option<bool>,
    #[serde(default)]
    central: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    generators: Vec<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    cap: Option<usize>,
    suites: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub enum LieSource {
    Torus(Vec<Vec<CycScalar>>),
    Maps(Vec<EndV>),
    Biderivations,
}

#[derive(Debug, Clone)]
pub struct LieSpec {
    pub source: LieSource,
    pub central: usize,
}

/// A validated spec file.
#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub braiding: DiagonalBraiding,
    pub realization: Option<YDRealization>,
    pub lie: Option<LieSpec>,
    pub ideal: Option<Vec<TensorElement>>,
    pub cap: Option<usize>,
    pub suites: Vec<String>,
}

struct Source<'a>(&'a str);

impl Source<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> SpecError {
        let before = &self.0[..offset.min(self.0.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
        SpecError {
            line,
            column,
            message: message.into(),
        }
    }

    fn scalar(&self, v: &Spanned<Value>) -> Result<CycScalar, SpecError> {
        let start = v.span().start;
        match v.get_ref() {
            Value::Integer(n) => Ok(CycScalar::from_int(*n)),
            // Columns inside the string are offset by the opening quote.
            Value::String(s) => {
                parse_scalar(s).map_err(|e| self.at(start + 1 + e.column, e.message))
            }
            _ => Err(self.at(start, "expected a scalar (integer or string)")),
        }
    }

    fn row(&self, r: &[Spanned<Value>]) -> Result<Vec<CycScalar>, SpecError> {
        r.iter().map(|v| self.scalar(v)).collect()
    }
}

impl SpecDocument {
    pub fn parse(src: &str) -> Result<Self, SpecError> {
        let s = Source(src);
        let raw: RawSpec = toml::from_str(src).map_err(|e| {
            let off = e.span().map_or(0, |r| r.start);
            s.at(off, e.message().to_string())
        })?;

        let q = raw
            .braiding
            .q
            .get_ref()
            .iter()
            .map(|r| s.row(r))
            .collect::<Result<Vec<_>, _>>()?;
        let braiding = DiagonalBraiding::new(q)
            .map_err(|e| s.at(raw.braiding.q.span().start, e.to_string()))?;
        let theta = braiding.theta();

        let realization = match raw.realization {
            None => None,
            Some(r) => {
                let group = AbelianGroup::new(r.group.get_ref().clone())
                    .map_err(|e| s.at(r.group.span().start, e.to_string()))?;
                let mut pairs = Vec::new();
                if r.g.get_ref().len() != theta || r.chi.get_ref().len() != theta {
                    return Err(s.at(
                        r.g.span().start,
                        format!("expected {theta} entries in g and chi"),
                    ));
                }
                for (g, chi) in r.g.get_ref().iter().zip(r.chi.get_ref()) {
                    let mut values = Vec::new();
                    for v in chi {
                        let c = s.scalar(v)?;
                        values.push(RootOfUnity::from_scalar(&c).ok_or_else(|| {
                            s.at(v.span().start, "character value must be a root of unity")
                        })?);
                    }
                    pairs.push((GroupElement(g.clone()), Character::new(values)));
                }
                Some(
                    YDRealization::new(group, pairs, braiding.clone())
                        .map_err(|e| s.at(r.g.span().start, e.to_string()))?,
                )
            }
        };

        let lie = match raw.lie {
            None => None,
            Some(l) => {
                let chosen = [
                    l.torus.is_some(),
                    l.maps.is_some(),
                    l.biderivations == Some(true),
                ];
                if chosen.iter().filter(|&&b| b).count() > 1 {
                    return Err(s.at(0, "lie: give only one of torus, maps, biderivations"));
                }
                let source = if let Some(t) = &l.torus {
                    LieSource::Torus(t.iter().map(|r| s.row(r)).collect::<Result<_, _>>()?)
                } else if let Some(m) = &l.maps {
                    let mut maps = Vec::new();
                    for rows in m {
                        let rows: Vec<Vec<CycScalar>> =
                            rows.iter().map(|r| s.row(r)).collect::<Result<_, _>>()?;
                        let at = m
                            .first()
                            .and_then(|r| r.first())
                            .and_then(|r| r.first())
                            .map_or(0, |v| v.span().start);
                        maps.push(EndV::from_rows(rows).map_err(|e| s.at(at, e.to_string()))?);
                    }
                    LieSource::Maps(maps)
                } else if l.biderivations == Some(true) {
                    LieSource::Biderivations
                } else {
                    LieSource::Torus(Vec::new())
                };
                Some(LieSpec {
                    source,
                    central: l.central,
                })
            }
        };

        let ideal = match raw.ideal {
            None => None,
            Some(i) => Some(
                i.generators
                    .iter()
                    .map(|g| {
                        parse_element(g.get_ref(), theta)
                            .map_err(|e| s.at(g.span().start + 1 + e.column, e.message))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };

        let (cap, suites) = raw.run.map_or((None, Vec::new()), |r| {
            (r.cap, r.suites.unwrap_or_default())
        });
        Ok(SpecDocument {
            braiding,
            realization,
            lie,
            ideal,
            cap,
            suites,
        })
    }

    /// The given realization, or the canonical one over `(Z/m)^θ`.
    pub fn realization(&self) -> anyhow::Result<YDRealization> {
        match &self.realization {
            Some(r) => Ok(r.clone()),
            None => Ok(derive_realization(&self.braiding)?),
        }
    }

    pub fn lie_action(&self, r: &YDRealization) -> anyhow::Result<Option<LieAction>> {
        let Some(l) = &self.lie else { return Ok(None) };
        let theta = self.braiding.theta();
        Ok(Some(match &l.source {
            LieSource::Torus(hs) => torus_lie_algebra(theta, hs)?,
            LieSource::Maps(m) => lie_algebra_of_maps(theta, m.clone())?,
            LieSource::Biderivations => biderivation_algebra(r),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_document() {
        let src = r#"
[braiding]
q = [["z(4)"]]

[lie]
torus = [[1]]

[run]
cap = 5
suites = ["hopf", "comodule"]
"#;
        let d = SpecDocument::parse(src).unwrap();
        assert_eq!(d.braiding.theta(), 1);
        assert_eq!(d.cap, Some(5));
        assert_eq!(d.suites, vec!["hopf", "comodule"]);
        assert!(matches!(d.lie.unwrap().source, LieSource::Torus(ref t) if t.len() == 1));
    }

    #[test]
    fn unknown_key_has_position() {
        let src = "[braiding]\nq = [[\"-1\"]]\nflavour = 3\n";
        let e = SpecDocument::parse(src).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("flavour"), "{}", e.message);
    }

    #[test]
    fn bad_scalar_points_inside_string() {
        let src = "[braiding]\nq = [[\"z(4\"]]\n";
        let e = SpecDocument::parse(src).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.column > 7, "{e}");
    }

    #[test]
    fn realization_and_ideal() {
        let src = r#"
[braiding]
q = [[-1]]
[realization]
group = [2]
g = [[1]]
chi = [["-1"]]
[ideal]
generators = ["x1*x1"]
"#;
        let d = SpecDocument::parse(src).unwrap();
        assert_eq!(d.realization.unwrap().group().order(), 2);
        assert_eq!(d.ideal.unwrap().len(), 1);
    }
}
