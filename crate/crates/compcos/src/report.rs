//! Machine-readable suite reports. The JSON layout is described by
//! `schema/suite_report.schema.json`.

use compcos_core::{Comparison, C64};
use serde::{Deserialize, Serialize};

/// Largest skipped-sample fraction a passing estimate may carry.
pub const MAX_SKIPPED_FRACTION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    #[serde(with = "float")]
    pub re: f64,
    #[serde(with = "float")]
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub lhs: Complex,
    pub rhs: Complex,
    #[serde(with = "float")]
    pub stderr: f64,
    #[serde(with = "float")]
    pub residual: f64,
    #[serde(with = "float")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(with = "float")]
    pub skipped_fraction: f64,
}

impl From<Comparison> for Case {
    fn from(c: Comparison) -> Self {
        Case {
            name: c.name,
            lhs: c.lhs.into(),
            rhs: c.rhs.into(),
            stderr: c.stderr,
            residual: c.residual,
            tolerance: c.tolerance,
            pass: c.pass,
            skipped_fraction: c.skipped_fraction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    /// The `--samples` override, or 0 when each suite used its configured
    /// budget.
    pub samples: u64,
    pub partitions: usize,
    pub runtime_ms: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub meta: Meta,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// JSON has no NaN or infinities; those are written as the strings `"NaN"`,
/// `"Infinity"` and `"-Infinity"`.
mod float {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("NaN")
        } else if *x > 0.0 {
            s.serialize_str("Infinity")
        } else {
            s.serialize_str("-Infinity")
        }
    }

    struct FloatVisitor;

    impl Visitor<'_> for FloatVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or one of \"NaN\", \"Infinity\", \"-Infinity\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "NaN" => Ok(f64::NAN),
                "Infinity" => Ok(f64::INFINITY),
                "-Infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(FloatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SuiteReport {
        let cases = vec![
            Comparison::values("exact", C64::new(1.0, 0.25), C64::new(1.0, 0.25), 1e-12).into(),
            Comparison::values("nan", C64::new(f64::NAN, 0.0), C64::new(1.0 / 3.0, -2e-300), 1.0).into(),
        ];
        SuiteReport {
            suite: "t".into(),
            cases,
            meta: Meta {
                seed: u64::MAX,
                samples: 0,
                partitions: 3,
                runtime_ms: 12,
                version: "0.1.0".into(),
            },
        }
    }

    #[test]
    fn round_trips_including_non_finite_fields() {
        let r = sample();
        let back = SuiteReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back.cases[0], r.cases[0]);
        assert!(back.cases[1].lhs.re.is_nan() && back.cases[1].residual == f64::INFINITY);
        assert_eq!(back.cases[1].rhs, r.cases[1].rhs);
        assert_eq!(back.meta, r.meta);
        assert!(!back.pass());
        assert_eq!(back.failures().count(), 1);
    }
}
