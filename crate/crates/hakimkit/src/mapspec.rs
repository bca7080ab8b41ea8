//! Textual map specifications: a JSON document describing either a factor
//! pair (g, h) or a tangent-to-identity pair (p, q), in an exact or
//! floating coefficient domain.
//!
//! ```json
//! {"form":"gh","truncation":6,"domain":"exact",
//!  "g":[[1,0,"1","0"]],
//!  "h":[[1,0,"1","0"],[0,1,"-1","0"]]}
//! ```
//!
//! Each coefficient entry is `[alpha, beta, re, im]` with nonnegative
//! integer exponents. In the exact domain, `re` and `im` are rational
//! strings like `"-3/7"`; in the float domain they are JSON numbers.
//! Mixing the two is an error, so binary floats never leak into exact
//! computations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{format_rational, parse_rational, GaussianRational};
use crate::maps::{AxesFixingMap, MapError, TangentMap};
use crate::series::{Monomial, Series, SeriesError};

#[derive(Debug, Error)]
pub enum MapSpecError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown form {0:?}; expected \"gh\" or \"pq\"")]
    UnknownForm(String),
    #[error("unknown domain {0:?}; expected \"exact\" or \"float\"")]
    UnknownDomain(String),
    #[error("form {form:?} requires series {field:?}")]
    MissingSeries { form: &'static str, field: &'static str },
    #[error("series {field:?} does not belong to form {form:?}")]
    UnexpectedSeries { form: &'static str, field: &'static str },
    #[error("{field}[{index}]: exact domain requires rational strings, found a number")]
    NumberInExactDomain { field: &'static str, index: usize },
    #[error("{field}[{index}]: float domain requires numbers, found a string")]
    StringInFloatDomain { field: &'static str, index: usize },
    #[error("{field}[{index}]: cannot parse {text:?} as a rational p/q")]
    BadRational {
        field: &'static str,
        index: usize,
        text: String,
    },
    #[error("{field}[{index}]: degree {alpha}+{beta} exceeds truncation {trunc}")]
    DegreeExceedsTruncation {
        field: &'static str,
        index: usize,
        alpha: u32,
        beta: u32,
        trunc: u32,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// One coefficient component: a number in the float domain, a rational
/// string in the exact domain.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffLit {
    Num(f64),
    Str(String),
}

type Entry = (u32, u32, CoeffLit, CoeffLit);

/// The raw JSON shape of a map specification.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMapSpec {
    pub form: String,
    pub truncation: u32,
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Entry>>,
}

/// A validated map specification.
#[derive(Clone, PartialEq, Debug)]
pub enum MapSpec {
    GhExact(AxesFixingMap<GaussianRational>),
    GhFloat(AxesFixingMap<Complex64>),
    PqExact(TangentMap<GaussianRational>),
    PqFloat(TangentMap<Complex64>),
}

impl MapSpec {
    pub fn form(&self) -> &'static str {
        match self {
            MapSpec::GhExact(_) | MapSpec::GhFloat(_) => "gh",
            MapSpec::PqExact(_) | MapSpec::PqFloat(_) => "pq",
        }
    }

    pub fn domain(&self) -> &'static str {
        match self {
            MapSpec::GhExact(_) | MapSpec::PqExact(_) => "exact",
            MapSpec::GhFloat(_) | MapSpec::PqFloat(_) => "float",
        }
    }

    pub fn truncation(&self) -> u32 {
        match self {
            MapSpec::GhExact(m) => m.trunc(),
            MapSpec::GhFloat(m) => m.trunc(),
            MapSpec::PqExact(f) => f.trunc(),
            MapSpec::PqFloat(f) => f.trunc(),
        }
    }

    /// The map as a floating tangent-to-identity map, expanding factor
    /// pairs and converting exact coefficients as needed.
    pub fn tangent_float(&self) -> TangentMap<Complex64> {
        match self {
            MapSpec::GhExact(m) => m.to_float().expand(),
            MapSpec::GhFloat(m) => m.expand(),
            MapSpec::PqExact(f) => f.to_float(),
            MapSpec::PqFloat(f) => f.clone(),
        }
    }

    /// The map as an exact tangent-to-identity map, when the domain is
    /// exact.
    pub fn tangent_exact(&self) -> Option<TangentMap<GaussianRational>> {
        match self {
            MapSpec::GhExact(m) => Some(m.expand()),
            MapSpec::PqExact(f) => Some(f.clone()),
            _ => None,
        }
    }

    /// The map as an exact factor pair, when the domain is exact:
    /// directly for gh form, by contraction for pq form (which fails if
    /// the map does not fix both axes).
    pub fn axes_exact(&self) -> Option<Result<AxesFixingMap<GaussianRational>, MapError>> {
        match self {
            MapSpec::GhExact(m) => Some(Ok(m.clone())),
            MapSpec::PqExact(f) => Some(crate::maps::contract(f)),
            _ => None,
        }
    }

    /// The map as a floating factor pair: directly for gh form, by
    /// contraction for pq form.
    pub fn axes_float(&self) -> Result<AxesFixingMap<Complex64>, MapError> {
        match self {
            MapSpec::GhExact(m) => Ok(m.to_float()),
            MapSpec::GhFloat(m) => Ok(m.clone()),
            MapSpec::PqExact(f) => crate::maps::contract(&f.to_float()),
            MapSpec::PqFloat(f) => crate::maps::contract(f),
        }
    }
}

fn series_exact(
    field: &'static str,
    entries: &[Entry],
    trunc: u32,
) -> Result<Series<GaussianRational>, MapSpecError> {
    let mut monomials = Vec::with_capacity(entries.len());
    for (index, (alpha, beta, re, im)) in entries.iter().enumerate() {
        if alpha.saturating_add(*beta) > trunc {
            return Err(MapSpecError::DegreeExceedsTruncation {
                field,
                index,
                alpha: *alpha,
                beta: *beta,
                trunc,
            });
        }
        let parse = |lit: &CoeffLit| -> Result<_, MapSpecError> {
            match lit {
                CoeffLit::Num(_) => Err(MapSpecError::NumberInExactDomain { field, index }),
                CoeffLit::Str(s) => parse_rational(s).ok_or_else(|| MapSpecError::BadRational {
                    field,
                    index,
                    text: s.clone(),
                }),
            }
        };
        monomials.push(Monomial {
            alpha: *alpha,
            beta: *beta,
            coeff: GaussianRational::new(parse(re)?, parse(im)?),
        });
    }
    Ok(Series::from_monomials(trunc, monomials)?)
}

fn series_float(
    field: &'static str,
    entries: &[Entry],
    trunc: u32,
) -> Result<Series<Complex64>, MapSpecError> {
    let mut monomials = Vec::with_capacity(entries.len());
    for (index, (alpha, beta, re, im)) in entries.iter().enumerate() {
        if alpha.saturating_add(*beta) > trunc {
            return Err(MapSpecError::DegreeExceedsTruncation {
                field,
                index,
                alpha: *alpha,
                beta: *beta,
                trunc,
            });
        }
        let parse = |lit: &CoeffLit| -> Result<f64, MapSpecError> {
            match lit {
                CoeffLit::Num(v) => Ok(*v),
                CoeffLit::Str(_) => Err(MapSpecError::StringInFloatDomain { field, index }),
            }
        };
        monomials.push(Monomial {
            alpha: *alpha,
            beta: *beta,
            coeff: Complex64::new(parse(re)?, parse(im)?),
        });
    }
    Ok(Series::from_monomials(trunc, monomials)?)
}

/// Parse and validate a JSON map specification.
pub fn parse_mapspec(text: &str) -> Result<MapSpec, MapSpecError> {
    let raw: RawMapSpec = serde_json::from_str(text)?;
    build(&raw)
}

/// Validate a raw specification into a [`MapSpec`].
pub fn build(raw: &RawMapSpec) -> Result<MapSpec, MapSpecError> {
    let exact = match raw.domain.as_str() {
        "exact" => true,
        "float" => false,
        other => return Err(MapSpecError::UnknownDomain(other.to_string())),
    };
    let trunc = raw.truncation;

    let require = |field: &'static str,
                   entries: &Option<Vec<Entry>>,
                   form: &'static str|
     -> Result<Vec<Entry>, MapSpecError> {
        entries
            .clone()
            .ok_or(MapSpecError::MissingSeries { form, field })
    };
    let forbid = |field: &'static str,
                  entries: &Option<Vec<Entry>>,
                  form: &'static str|
     -> Result<(), MapSpecError> {
        if entries.is_some() {
            Err(MapSpecError::UnexpectedSeries { form, field })
        } else {
            Ok(())
        }
    };

    match raw.form.as_str() {
        "gh" => {
            forbid("p", &raw.p, "gh")?;
            forbid("q", &raw.q, "gh")?;
            let g = require("g", &raw.g, "gh")?;
            let h = require("h", &raw.h, "gh")?;
            if exact {
                let m = AxesFixingMap::new(
                    series_exact("g", &g, trunc)?,
                    series_exact("h", &h, trunc)?,
                )?;
                Ok(MapSpec::GhExact(m))
            } else {
                let m = AxesFixingMap::new(
                    series_float("g", &g, trunc)?,
                    series_float("h", &h, trunc)?,
                )?;
                Ok(MapSpec::GhFloat(m))
            }
        }
        "pq" => {
            forbid("g", &raw.g, "pq")?;
            forbid("h", &raw.h, "pq")?;
            let p = require("p", &raw.p, "pq")?;
            let q = require("q", &raw.q, "pq")?;
            if exact {
                let f = TangentMap::new(
                    series_exact("p", &p, trunc)?,
                    series_exact("q", &q, trunc)?,
                )?;
                Ok(MapSpec::PqExact(f))
            } else {
                let f = TangentMap::new(
                    series_float("p", &p, trunc)?,
                    series_float("q", &q, trunc)?,
                )?;
                Ok(MapSpec::PqFloat(f))
            }
        }
        other => Err(MapSpecError::UnknownForm(other.to_string())),
    }
}

fn entries_exact(s: &Series<GaussianRational>) -> Vec<Entry> {
    s.monomials()
        .map(|m| {
            (
                m.alpha,
                m.beta,
                CoeffLit::Str(format_rational(m.coeff.re())),
                CoeffLit::Str(format_rational(m.coeff.im())),
            )
        })
        .collect()
}

fn entries_float(s: &Series<Complex64>) -> Vec<Entry> {
    s.monomials()
        .map(|m| (m.alpha, m.beta, CoeffLit::Num(m.coeff.re), CoeffLit::Num(m.coeff.im)))
        .collect()
}

/// Serialize a validated spec back to its raw JSON shape. Parsing the
/// result reproduces the same [`MapSpec`].
pub fn to_raw(spec: &MapSpec) -> RawMapSpec {
    let (form, domain) = (spec.form().to_string(), spec.domain().to_string());
    let mut raw = RawMapSpec {
        form,
        truncation: spec.truncation(),
        domain,
        g: None,
        h: None,
        p: None,
        q: None,
    };
    match spec {
        MapSpec::GhExact(m) => {
            raw.g = Some(entries_exact(m.g()));
            raw.h = Some(entries_exact(m.h()));
        }
        MapSpec::GhFloat(m) => {
            raw.g = Some(entries_float(m.g()));
            raw.h = Some(entries_float(m.h()));
        }
        MapSpec::PqExact(f) => {
            raw.p = Some(entries_exact(f.p()));
            raw.q = Some(entries_exact(f.q()));
        }
        MapSpec::PqFloat(f) => {
            raw.p = Some(entries_float(f.p()));
            raw.q = Some(entries_float(f.q()));
        }
    }
    raw
}

/// Serialize a validated spec to JSON text.
pub fn serialize_mapspec(spec: &MapSpec) -> String {
    serde_json::to_string_pretty(&to_raw(spec)).expect("mapspec serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;

    const GH_EXACT: &str = r#"{"form":"gh","truncation":6,"domain":"exact",
        "g":[[1,0,"1","0"]],
        "h":[[1,0,"1","0"],[0,1,"-1","0"]]}"#;

    #[test]
    fn parses_exact_gh_document() {
        let spec = parse_mapspec(GH_EXACT).unwrap();
        assert_eq!(spec.form(), "gh");
        assert_eq!(spec.domain(), "exact");
        assert_eq!(spec.truncation(), 6);
        let MapSpec::GhExact(m) = &spec else {
            panic!("expected exact gh");
        };
        assert_eq!(m.g().coeff(1, 0), GaussianRational::from_i64(1, 0));
        assert_eq!(m.h().coeff(0, 1), GaussianRational::from_i64(-1, 0));
        assert_eq!(m.k(), Some(1));
    }

    #[test]
    fn parses_float_pq_document() {
        let text = r#"{"form":"pq","truncation":3,"domain":"float",
            "p":[[2,0,-1.0,0.0]],
            "q":[[0,2,-1.0,0.0]]}"#;
        let spec = parse_mapspec(text).unwrap();
        let MapSpec::PqFloat(f) = &spec else {
            panic!("expected float pq");
        };
        assert_eq!(f.p().coeff(2, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(f.q().coeff(0, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(f.order().unwrap(), 2);
    }

    #[test]
    fn rational_strings_parse_exactly() {
        let text = r#"{"form":"gh","truncation":4,"domain":"exact",
            "g":[[1,1,"-3/7","2/5"]],"h":[]}"#;
        let spec = parse_mapspec(text).unwrap();
        let MapSpec::GhExact(m) = &spec else {
            panic!();
        };
        assert_eq!(
            m.g().coeff(1, 1),
            GaussianRational::from_ratios(-3, 7, 2, 5)
        );
    }

    #[test]
    fn negative_exponent_is_a_syntax_error() {
        let text = r#"{"form":"gh","truncation":4,"domain":"exact",
            "g":[[-1,0,"1","0"]],"h":[]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::Json(_)
        ));
    }

    #[test]
    fn mixed_domain_is_rejected_with_location() {
        let text = r#"{"form":"gh","truncation":4,"domain":"exact",
            "g":[[1,0,"1","0"],[2,0,0.5,"0"]],"h":[]}"#;
        let err = parse_mapspec(text).unwrap_err();
        assert!(matches!(
            err,
            MapSpecError::NumberInExactDomain { field: "g", index: 1 }
        ));

        let text = r#"{"form":"pq","truncation":4,"domain":"float",
            "p":[[2,0,"1/2",0.0]],"q":[]}"#;
        let err = parse_mapspec(text).unwrap_err();
        assert!(matches!(
            err,
            MapSpecError::StringInFloatDomain { field: "p", index: 0 }
        ));
    }

    #[test]
    fn bad_rational_is_located() {
        let text = r#"{"form":"gh","truncation":4,"domain":"exact",
            "g":[[1,0,"3//4","0"]],"h":[]}"#;
        let err = parse_mapspec(text).unwrap_err();
        assert!(
            matches!(err, MapSpecError::BadRational { field: "g", index: 0, ref text } if text == "3//4")
        );
    }

    #[test]
    fn degree_beyond_truncation_is_located() {
        let text = r#"{"form":"gh","truncation":3,"domain":"exact",
            "g":[[2,2,"1","0"]],"h":[]}"#;
        let err = parse_mapspec(text).unwrap_err();
        assert!(matches!(
            err,
            MapSpecError::DegreeExceedsTruncation {
                field: "g",
                index: 0,
                alpha: 2,
                beta: 2,
                trunc: 3
            }
        ));
    }

    #[test]
    fn form_and_series_fields_must_agree() {
        let text = r#"{"form":"gh","truncation":3,"domain":"exact",
            "p":[[2,0,"1","0"]],"g":[],"h":[]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::UnexpectedSeries { form: "gh", field: "p" }
        ));

        let text = r#"{"form":"pq","truncation":3,"domain":"exact","p":[[2,0,"1","0"]]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::MissingSeries { form: "pq", field: "q" }
        ));
    }

    #[test]
    fn unknown_form_and_domain_are_rejected() {
        let text = r#"{"form":"xy","truncation":3,"domain":"exact","g":[],"h":[]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::UnknownForm(_)
        ));
        let text = r#"{"form":"gh","truncation":3,"domain":"interval","g":[],"h":[]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::UnknownDomain(_)
        ));
    }

    #[test]
    fn low_order_pq_terms_are_rejected_via_map_validation() {
        let text = r#"{"form":"pq","truncation":3,"domain":"float",
            "p":[[1,0,0.5,0.0]],"q":[]}"#;
        assert!(matches!(
            parse_mapspec(text).unwrap_err(),
            MapSpecError::Map(MapError::LowOrderTerm { .. })
        ));
    }

    #[test]
    fn round_trips_exact_and_float_specs() {
        for text in [
            GH_EXACT,
            r#"{"form":"pq","truncation":3,"domain":"float",
                "p":[[2,0,-1.0,0.0]],"q":[[0,2,-1.0,0.25]]}"#,
        ] {
            let spec = parse_mapspec(text).unwrap();
            let serialized = serialize_mapspec(&spec);
            let reparsed = parse_mapspec(&serialized).unwrap();
            assert_eq!(spec, reparsed);
        }
    }

    #[test]
    fn conversion_helpers_dispatch_by_form_and_domain() {
        let spec = parse_mapspec(GH_EXACT).unwrap();
        let f = spec.tangent_float();
        assert_eq!(f.order().unwrap(), 3);
        assert!(spec.tangent_exact().is_some());
        assert!(spec.axes_exact().unwrap().is_ok());

        let text = r#"{"form":"pq","truncation":4,"domain":"float",
            "p":[[2,1,1.0,0.0]],"q":[]}"#;
        let spec = parse_mapspec(text).unwrap();
        assert!(spec.tangent_exact().is_none());
        // p = z²w is divisible by z and w, so contraction succeeds.
        assert!(spec.axes_float().is_ok());
    }
}
