//! Run configuration: defaults, overlaid by an optional JSON file, overlaid
//! by command-line flags.

use std::fs;
use std::path::Path;

use gausspacket::{
    validate_initial_with, CorrSign, InitialGaussian, SystemKind, SystemParams, Tolerances,
};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Shape of the `--config` document. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub system: SystemBlock,
    #[serde(default)]
    pub initial: InitialBlock,
    #[serde(default)]
    pub grid: GridBlock,
    pub format: Option<Format>,
    pub precision: Option<usize>,
    pub strict: Option<bool>,
    #[serde(default)]
    pub tolerances: ToleranceBlock,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemBlock {
    pub kind: Option<String>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub hbar: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialBlock {
    pub x0: Option<f64>,
    pub p0: Option<f64>,
    pub dx0: Option<f64>,
    pub dp0: Option<f64>,
    pub sign: Option<String>,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceBlock {
    pub uncertainty_eps: Option<f64>,
    pub wronskian_eps: Option<f64>,
    pub norm_eps: Option<f64>,
    pub oracle_l2_eps: Option<f64>,
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub system: Option<String>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub hbar: Option<f64>,
    pub x0: Option<f64>,
    pub p0: Option<f64>,
    pub dx0: Option<f64>,
    pub dp0: Option<f64>,
    pub sign: Option<String>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub n: Option<usize>,
    pub format: Option<Format>,
    pub precision: Option<usize>,
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemParams,
    pub initial: InitialGaussian,
    pub grid: GridBlock,
    pub format: Format,
    pub precision: usize,
    pub strict: bool,
    pub tolerances: Tolerances,
}

pub const DEFAULT_PRECISION: usize = 17;

pub fn parse_kind(s: &str) -> Result<SystemKind, String> {
    match s {
        "free" => Ok(SystemKind::FreeMass),
        "osc" => Ok(SystemKind::Oscillator),
        _ => Err(format!("unknown system '{s}', expected free or osc")),
    }
}

pub fn parse_sign(s: &str) -> Result<CorrSign, String> {
    match s {
        "+" | "plus" => Ok(CorrSign::Plus),
        "-" | "minus" => Ok(CorrSign::Minus),
        _ => Err(format!("unknown sign '{s}', expected + or -")),
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: &Overrides) -> Result<RunConfig, String> {
        let kind = parse_kind(
            flags
                .system
                .as_deref()
                .or(file.system.kind.as_deref())
                .unwrap_or("free"),
        )?;
        let mass = flags.mass.or(file.system.mass).unwrap_or(1.0);
        let omega = flags.omega.or(file.system.omega).unwrap_or(1.0);
        let hbar = flags.hbar.or(file.system.hbar).unwrap_or(1.0);
        let system = match kind {
            SystemKind::FreeMass => SystemParams::free_mass(mass, hbar),
            SystemKind::Oscillator => SystemParams::oscillator(mass, omega, hbar),
        }
        .map_err(|e| e.to_string())?;

        let sign = parse_sign(
            flags
                .sign
                .as_deref()
                .or(file.initial.sign.as_deref())
                .unwrap_or("-"),
        )?;
        let initial = InitialGaussian::new(
            flags.x0.or(file.initial.x0).unwrap_or(0.0),
            flags.p0.or(file.initial.p0).unwrap_or(0.0),
            flags.dx0.or(file.initial.dx0).unwrap_or(1.0),
            flags.dp0.or(file.initial.dp0).unwrap_or(1.0),
            sign,
        );

        let grid = GridBlock {
            xmin: flags.xmin.or(file.grid.xmin),
            xmax: flags.xmax.or(file.grid.xmax),
            n: flags.n.or(file.grid.n),
        };

        let precision = flags
            .precision
            .or(file.precision)
            .unwrap_or(DEFAULT_PRECISION);
        if !(1..=17).contains(&precision) {
            return Err(format!(
                "precision must be between 1 and 17, got {precision}"
            ));
        }

        let d = Tolerances::default();
        let t = &file.tolerances;
        let tolerances = Tolerances {
            uncertainty_eps: t.uncertainty_eps.unwrap_or(d.uncertainty_eps),
            wronskian_eps: t.wronskian_eps.unwrap_or(d.wronskian_eps),
            norm_eps: t.norm_eps.unwrap_or(d.norm_eps),
            oracle_l2_eps: t.oracle_l2_eps.unwrap_or(d.oracle_l2_eps),
        };
        tolerances.validate().map_err(|e| e.to_string())?;
        let initial = validate_initial_with(&system, &initial, tolerances.uncertainty_eps)
            .map_err(|e| e.to_string())?;

        Ok(RunConfig {
            system,
            initial,
            grid,
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            precision,
            strict: flags.strict || file.strict.unwrap_or(false),
            tolerances,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(json: &str) -> FileConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(FileConfig::default(), &Overrides::default()).unwrap();
        assert_eq!(c.system.kind, SystemKind::FreeMass);
        assert_eq!((c.initial.dx0, c.initial.dp0), (1.0, 1.0));
        assert_eq!(c.initial.corr_sign, CorrSign::Minus);
        assert_eq!(c.precision, 17);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn flags_beat_file() {
        let f = file(
            r#"{"system": {"kind": "osc", "omega": 2.0}, "initial": {"dx0": 2.0, "sign": "+"}}"#,
        );
        let flags = Overrides {
            omega: Some(3.0),
            ..Default::default()
        };
        let c = RunConfig::resolve(f, &flags).unwrap();
        assert_eq!(c.system.kind, SystemKind::Oscillator);
        assert_eq!(c.system.omega, 3.0);
        assert_eq!(c.initial.dx0, 2.0);
        assert_eq!(c.initial.corr_sign, CorrSign::Plus);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"sytem": {}}"#).is_err());
    }

    #[test]
    fn uncertainty_violation_message() {
        let flags = Overrides {
            dp0: Some(0.1),
            ..Default::default()
        };
        let err = RunConfig::resolve(FileConfig::default(), &flags).unwrap_err();
        assert!(err.contains("uncertainty principle violated"), "{err}");
    }

    #[test]
    fn bad_precision() {
        let flags = Overrides {
            precision: Some(0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(FileConfig::default(), &flags).is_err());
    }

    #[test]
    fn tolerances_from_file() {
        let c = RunConfig::resolve(
            file(r#"{"tolerances": {"oracle_l2_eps": 1e-15}}"#),
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(c.tolerances.oracle_l2_eps, 1e-15);
        assert!(RunConfig::resolve(
            file(r#"{"tolerances": {"norm_eps": -1}}"#),
            &Overrides::default()
        )
        .is_err());
    }
}
