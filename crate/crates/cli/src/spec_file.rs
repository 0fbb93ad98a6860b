//! JSON cone-spec files.
//!
//! ```json
//! {"kind": "full"}
//! {"kind": "halfplane",
//!  "inner_normal": [nx, ny] | {"slope": "NUMSPEC", "x_sign": 1|-1},
//!  "boundary_included": [bool, bool]}
//! {"kind": "sector",
//!  "rays": [{"dir": {"vector": [x, y]}
//!            | {"x_sign": 1|-1, "slope": "NUMSPEC"|"vertical_up"|"vertical_down"},
//!            "included": bool}, ...]}
//! ```
//!
//! Number literals use the exact grammar `INT`, `INT/POSINT`, or
//! `(INT+INT*sqrt(POSINT))/POSINT`. Sector rays must be listed in
//! counterclockwise order; they are validated, never reordered.

use serde::Deserialize;

use coneatoms_core::cone::{ConeError, ConeSpec, RayDir, RaySpec};
use coneatoms_core::ExactReal;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ConeFile {
    Full,
    Halfplane {
        inner_normal: NormalJson,
        boundary_included: (bool, bool),
    },
    Sector {
        rays: Vec<RayJson>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NormalJson {
    Vector([i64; 2]),
    Slope { slope: String, x_sign: i8 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RayJson {
    dir: DirJson,
    included: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DirJson {
    Vector { vector: [i64; 2] },
    Slope { x_sign: i8, slope: String },
}

fn parse_numspec(text: &str, field: &str) -> Result<ExactReal, CliError> {
    text.parse::<ExactReal>()
        .map_err(|e| CliError::parse(format!("{field}: {e}")))
}

fn cone_error(e: ConeError, field: &str) -> CliError {
    match e {
        ConeError::DegenerateCone => CliError::new(4, format!("{field}: {e}")),
        ConeError::InsufficientPrecision => CliError::new(3, format!("{field}: {e}")),
        other => CliError::parse(format!("{field}: {other}")),
    }
}

fn dir_from_json(dir: &DirJson, field: &str) -> Result<RayDir, CliError> {
    match dir {
        DirJson::Vector { vector: [x, y] } => {
            RayDir::vector(*x, *y).map_err(|e| cone_error(e, field))
        }
        DirJson::Slope { x_sign, slope } => match slope.as_str() {
            "vertical_up" => Ok(RayDir::vertical(true)),
            "vertical_down" => Ok(RayDir::vertical(false)),
            text => {
                let value = parse_numspec(text, field)?;
                RayDir::from_slope(*x_sign, value).map_err(|e| cone_error(e, field))
            }
        },
    }
}

/// Parses and validates a cone-spec document; inert inclusion flags on
/// irrational rays are collected as warnings.
pub fn parse_cone_file(text: &str) -> Result<(ConeSpec, Vec<String>), CliError> {
    let file: ConeFile = serde_json::from_str(text)
        .map_err(|e| CliError::parse(format!("cone spec: {e}")))?;
    let mut warnings = Vec::new();
    let cone = match file {
        ConeFile::Full => ConeSpec::full_plane(),
        ConeFile::Halfplane {
            inner_normal,
            boundary_included,
        } => {
            let normal = match &inner_normal {
                NormalJson::Vector([x, y]) => {
                    RayDir::vector(*x, *y).map_err(|e| cone_error(e, "inner_normal"))?
                }
                NormalJson::Slope { slope, x_sign } => {
                    let value = parse_numspec(slope, "inner_normal.slope")?;
                    RayDir::from_slope(*x_sign, value)
                        .map_err(|e| cone_error(e, "inner_normal"))?
                }
            };
            let cone = ConeSpec::half_plane(normal, boundary_included);
            if let ConeSpec::HalfPlane {
                included_ignored: true,
                ..
            } = &cone
            {
                warnings.push(String::from(
                    "boundary_included ignored: an irrational boundary carries no lattice points",
                ));
            }
            cone
        }
        ConeFile::Sector { rays } => {
            let [low_json, high_json]: [RayJson; 2] = rays
                .try_into()
                .map_err(|_| CliError::parse("sector: expected exactly two rays"))?;
            let low_dir = dir_from_json(&low_json.dir, "rays[0].dir")?;
            let high_dir = dir_from_json(&high_json.dir, "rays[1].dir")?;
            let low = RaySpec::new(low_dir, low_json.included);
            let high = RaySpec::new(high_dir, high_json.included);
            for (ray, name) in [(&low, "rays[0]"), (&high, "rays[1]")] {
                if ray.included_ignored {
                    warnings.push(format!(
                        "{name}: inclusion flag ignored on an irrational ray"
                    ));
                }
            }
            ConeSpec::sector(low, high).map_err(|e| cone_error(e, "rays"))?
        }
    };
    Ok((cone, warnings))
}
