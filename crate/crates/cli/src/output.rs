//! Deterministic JSON and CSV output shapes.
//!
//! All integers that can outgrow machine words (partial quotients,
//! convergents, atom counts) are emitted as lossless JSON numbers; atom
//! coordinates are box-bounded and stay plain.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Number, Value};

use coneatoms_core::cone::{CanonicalForm, Classification, PropertyFlags};
use coneatoms_core::monoid::{AtomReport, SpecialMonoid};
use coneatoms_core::LatticePoint;

pub fn big_number(v: &BigInt) -> Number {
    serde_json::from_str(&v.to_string()).expect("integer literal is a JSON number")
}

pub fn point_list(points: &[LatticePoint]) -> Vec<[i64; 2]> {
    points.iter().map(|p| [p.x, p.y]).collect()
}

#[derive(Serialize)]
pub struct CfOutput {
    pub value: String,
    pub partial_quotients: Vec<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
    pub convergents: Vec<[Number; 2]>,
    pub second_convergents: Map<String, Value>,
}

#[derive(Serialize)]
pub struct PeriodicOutput {
    pub preperiod: Vec<Number>,
    pub period: Vec<Number>,
}

#[derive(Serialize)]
pub struct AtomsOutput {
    pub family: String,
    pub alpha: String,
    pub bound: i64,
    pub atoms: Vec<[i64; 2]>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_formula: Option<Number>,
}

pub fn atoms_csv(report: &AtomReport) -> String {
    let mut out = String::from("x,y\n");
    for p in &report.atoms {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

#[derive(Serialize)]
pub struct FamilyJson {
    pub family: String,
    pub alpha: String,
}

impl FamilyJson {
    fn of(spec: &SpecialMonoid) -> FamilyJson {
        FamilyJson {
            family: spec.family().to_string(),
            alpha: spec.alpha().to_string(),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum CanonicalJson {
    Slope { alpha: String },
    Family(FamilyJson),
    Wedge { upper: FamilyJson, lower: FamilyJson },
}

#[derive(Serialize)]
pub struct ClassificationJson {
    pub case: String,
    pub phi: [[Number; 2]; 2],
    pub canonical: Option<CanonicalJson>,
}

impl ClassificationJson {
    pub fn of(class: &Classification) -> ClassificationJson {
        let rows = class.phi.rows();
        let phi = [
            [big_number(&rows[0][0]), big_number(&rows[0][1])],
            [big_number(&rows[1][0]), big_number(&rows[1][1])],
        ];
        let canonical = match &class.canonical {
            CanonicalForm::Group
            | CanonicalForm::UpperHalfClosed
            | CanonicalForm::UpperHalfWithAxis
            | CanonicalForm::UpperHalfOpen => None,
            CanonicalForm::IrrationalHalfPlane { alpha } => Some(CanonicalJson::Slope {
                alpha: alpha.to_string(),
            }),
            CanonicalForm::Special(spec) => Some(CanonicalJson::Family(FamilyJson::of(spec))),
            CanonicalForm::Wedge { upper, lower } => Some(CanonicalJson::Wedge {
                upper: FamilyJson::of(upper),
                lower: FamilyJson::of(lower),
            }),
        };
        ClassificationJson {
            case: class.case.to_string(),
            phi,
            canonical,
        }
    }
}

#[derive(Serialize)]
pub struct PropertiesJson {
    pub root_closed: bool,
    pub completely_integrally_closed: bool,
    pub krull: bool,
    pub primary_reduced: bool,
}

impl PropertiesJson {
    pub fn of(flags: &PropertyFlags) -> PropertiesJson {
        PropertiesJson {
            root_closed: flags.root_closed,
            completely_integrally_closed: flags.completely_integrally_closed,
            krull: flags.krull,
            primary_reduced: flags.primary_reduced,
        }
    }
}

#[derive(Serialize)]
pub struct ConeOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertiesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<[i64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atomic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}
