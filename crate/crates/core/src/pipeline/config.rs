//! INI-style configuration for the pipeline. Every key is optional; unknown
//! sections or keys are rejected with the offending line number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::spatial::{BilateralParams, Conductance, DiffusionParams};
use crate::spectral::{ChannelPolicy, HomomorphicParams};
use crate::tone::ToneOrder;
use crate::wavelet::{BankName, ShrinkKind, ShrinkageRule, ThresholdMode};

/// Which smoother fills the third pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingMethod {
    Bilateral,
    Anisotropic,
}

impl SmoothingMethod {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bilateral" => Some(Self::Bilateral),
            "anisotropic" | "diffusion" => Some(Self::Anisotropic),
            _ => None,
        }
    }
}

impl std::fmt::Display for SmoothingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Bilateral => "bilateral",
            Self::Anisotropic => "anisotropic",
        })
    }
}

/// Enable/disable switches for the four stages. Order is fixed; disabling a
/// stage never reorders the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageToggles {
    pub homomorphic: bool,
    pub wavelet: bool,
    pub smoothing: bool,
    pub tone: bool,
}

impl Default for StageToggles {
    fn default() -> Self {
        Self {
            homomorphic: true,
            wavelet: true,
            smoothing: true,
            tone: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub stages: StageToggles,
    pub homomorphic: HomomorphicParams,
    pub channels: ChannelPolicy,
    pub bank: BankName,
    pub rule: ShrinkageRule,
    pub levels: usize,
    pub smoothing_method: SmoothingMethod,
    pub bilateral: BilateralParams,
    pub diffusion: DiffusionParams,
    pub tone_order: ToneOrder,
    pub histogram_bins: usize,
    pub edge_low: f64,
    pub edge_high: f64,
    pub seed: u64,
    /// 0 lets the global thread pool decide.
    pub threads: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            stages: StageToggles::default(),
            homomorphic: HomomorphicParams::default(),
            channels: ChannelPolicy::Rgb,
            bank: BankName::Coif4,
            rule: ShrinkageRule::new(ShrinkKind::ModifiedBayes),
            levels: 3,
            smoothing_method: SmoothingMethod::Bilateral,
            bilateral: BilateralParams::default(),
            diffusion: DiffusionParams::default(),
            tone_order: ToneOrder::EqualizeThenStretch,
            histogram_bins: 64,
            edge_low: 40.0,
            edge_high: 100.0,
            seed: 7,
            threads: 0,
        }
    }
}

/// Raw scalar values gathered during the line scan, applied to the validated
/// parameter types once the whole file is read.
#[derive(Default)]
struct RawConfig {
    r_h: Option<f64>,
    r_l: Option<f64>,
    cutoff: Option<f64>,
    epsilon_log: Option<f64>,
    sigma_d: Option<f64>,
    sigma_r: Option<f64>,
    radius: Option<usize>,
    iterations: Option<usize>,
    lambda: Option<f64>,
    kappa: Option<f64>,
    conductance: Option<Conductance>,
}

fn bad(line: usize, reason: impl Into<String>) -> Error {
    Error::Config {
        line: Some(line),
        reason: reason.into(),
    }
}

fn parse_bool(v: &str, line: usize) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(line, format!("expected a boolean, got `{v}`"))),
    }
}

fn parse_f64(v: &str, line: usize) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| bad(line, format!("expected a number, got `{v}`")))
}

fn parse_usize(v: &str, line: usize) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| bad(line, format!("expected a nonnegative integer, got `{v}`")))
}

fn parse_u64(v: &str, line: usize) -> Result<u64> {
    v.parse::<u64>()
        .map_err(|_| bad(line, format!("expected a nonnegative integer, got `{v}`")))
}

/// Parses configuration text. Missing keys keep their defaults; unknown
/// sections, unknown keys, and malformed values are errors.
pub fn parse_config(text: &str) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    let mut raw = RawConfig::default();
    let mut section = String::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find(['#', ';']) {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| bad(line_no, "unterminated section header"))?
                .trim()
                .to_ascii_lowercase();
            match name.as_str() {
                "pipeline" | "homomorphic" | "wavelet" | "smoothing" | "diffusion" | "tone"
                | "metrics" => section = name,
                other => return Err(bad(line_no, format!("unknown section `[{other}]`"))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(line_no, "expected `key = value`"))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        if value.is_empty() {
            return Err(bad(line_no, format!("key `{key}` has no value")));
        }

        match (section.as_str(), key.as_str()) {
            ("pipeline", "seed") => cfg.seed = parse_u64(value, line_no)?,
            ("pipeline", "threads") => cfg.threads = parse_usize(value, line_no)?,

            ("homomorphic", "enabled") => cfg.stages.homomorphic = parse_bool(value, line_no)?,
            ("homomorphic", "r_h") => raw.r_h = Some(parse_f64(value, line_no)?),
            ("homomorphic", "r_l") => raw.r_l = Some(parse_f64(value, line_no)?),
            ("homomorphic", "cutoff") => raw.cutoff = Some(parse_f64(value, line_no)?),
            ("homomorphic", "epsilon_log") => raw.epsilon_log = Some(parse_f64(value, line_no)?),
            ("homomorphic", "channels") => {
                cfg.channels = ChannelPolicy::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown channel policy `{value}`")))?;
            }

            ("wavelet", "enabled") => cfg.stages.wavelet = parse_bool(value, line_no)?,
            ("wavelet", "bank") => {
                cfg.bank = BankName::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown filter bank `{value}`")))?;
            }
            ("wavelet", "rule") => {
                cfg.rule.kind = ShrinkKind::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown shrinkage rule `{value}`")))?;
            }
            ("wavelet", "mode") => {
                cfg.rule.mode = ThresholdMode::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown threshold mode `{value}`")))?;
            }
            ("wavelet", "levels") => {
                cfg.levels = parse_usize(value, line_no)?;
                if cfg.levels == 0 {
                    return Err(bad(line_no, "levels must be at least 1"));
                }
            }

            ("smoothing", "enabled") => cfg.stages.smoothing = parse_bool(value, line_no)?,
            ("smoothing", "method") => {
                cfg.smoothing_method = SmoothingMethod::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown smoothing method `{value}`")))?;
            }
            ("smoothing", "sigma_d") => raw.sigma_d = Some(parse_f64(value, line_no)?),
            ("smoothing", "sigma_r") => raw.sigma_r = Some(parse_f64(value, line_no)?),
            ("smoothing", "radius") => raw.radius = Some(parse_usize(value, line_no)?),

            ("diffusion", "iterations") => raw.iterations = Some(parse_usize(value, line_no)?),
            ("diffusion", "lambda") => raw.lambda = Some(parse_f64(value, line_no)?),
            ("diffusion", "kappa") => raw.kappa = Some(parse_f64(value, line_no)?),
            ("diffusion", "conductance") => {
                raw.conductance = Some(Conductance::parse(value).ok_or_else(|| {
                    bad(line_no, format!("unknown conductance function `{value}`"))
                })?);
            }

            ("tone", "enabled") => cfg.stages.tone = parse_bool(value, line_no)?,
            ("tone", "order") => {
                cfg.tone_order = ToneOrder::parse(value)
                    .ok_or_else(|| bad(line_no, format!("unknown tone order `{value}`")))?;
            }

            ("metrics", "histogram_bins") => {
                cfg.histogram_bins = parse_usize(value, line_no)?;
                if cfg.histogram_bins < 2 {
                    return Err(bad(line_no, "histogram_bins must be at least 2"));
                }
            }
            ("metrics", "edge_low") => cfg.edge_low = parse_f64(value, line_no)?,
            ("metrics", "edge_high") => cfg.edge_high = parse_f64(value, line_no)?,

            ("", k) => return Err(bad(line_no, format!("key `{k}` appears before any section"))),
            (s, k) => return Err(bad(line_no, format!("unknown key `{k}` in section `[{s}]`"))),
        }
    }

    apply_raw(&mut cfg, raw)?;
    if !(cfg.edge_low >= 0.0 && cfg.edge_low <= cfg.edge_high) {
        return Err(Error::Config {
            line: None,
            reason: format!(
                "edge thresholds must satisfy 0 <= low <= high, got {} / {}",
                cfg.edge_low, cfg.edge_high
            ),
        });
    }
    Ok(cfg)
}

/// Rebuilds the validated parameter structs from raw scalars, reporting
/// violations as configuration errors.
fn apply_raw(cfg: &mut PipelineConfig, raw: RawConfig) -> Result<()> {
    let as_config_err = |e: Error| match e {
        Error::InvalidParams { reason } => Error::Config { line: None, reason },
        other => other,
    };

    if raw.r_h.is_some() || raw.r_l.is_some() || raw.cutoff.is_some() || raw.epsilon_log.is_some()
    {
        let d = &cfg.homomorphic;
        cfg.homomorphic = HomomorphicParams::new(
            raw.r_h.unwrap_or_else(|| d.r_h()),
            raw.r_l.unwrap_or_else(|| d.r_l()),
            raw.cutoff.unwrap_or_else(|| d.cutoff()),
            raw.epsilon_log.unwrap_or_else(|| d.epsilon_log()),
        )
        .map_err(as_config_err)?;
    }

    if raw.sigma_d.is_some() || raw.sigma_r.is_some() || raw.radius.is_some() {
        let d = &cfg.bilateral;
        let mut b = BilateralParams::new(
            raw.sigma_d.unwrap_or_else(|| d.sigma_d()),
            raw.sigma_r.unwrap_or_else(|| d.sigma_r()),
        )
        .map_err(as_config_err)?;
        if let Some(r) = raw.radius {
            b = b.with_radius(r).map_err(as_config_err)?;
        }
        cfg.bilateral = b;
    }

    if raw.iterations.is_some()
        || raw.lambda.is_some()
        || raw.kappa.is_some()
        || raw.conductance.is_some()
    {
        let d = &cfg.diffusion;
        cfg.diffusion = DiffusionParams::new(
            raw.iterations.unwrap_or_else(|| d.iterations()),
            raw.lambda.unwrap_or_else(|| d.lambda()),
            raw.kappa.unwrap_or_else(|| d.kappa()),
            raw.conductance.unwrap_or(d.conductance()),
        )
        .map_err(as_config_err)?;
    }
    Ok(())
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
    }

    #[test]
    fn full_file_parses() {
        let text = "\
# pipeline configuration
[pipeline]
seed = 99
threads = 4

[homomorphic]
enabled = true
r_h = 3.0
r_l = 0.4
cutoff = 0.2
epsilon_log = 0.5
channels = luminance

[wavelet]
bank = db4
rule = visu
mode = hard
levels = 2

[smoothing]
method = anisotropic
sigma_d = 2.0
sigma_r = 25 ; inline comment
radius = 4

[diffusion]
iterations = 8
lambda = 0.2
kappa = 12
conductance = rational

[tone]
order = stretch_then_equalize

[metrics]
histogram_bins = 32
edge_low = 10
edge_high = 50
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.threads, 4);
        assert_eq!(cfg.homomorphic.r_h(), 3.0);
        assert_eq!(cfg.channels, ChannelPolicy::Luminance);
        assert_eq!(cfg.bank, BankName::Db4);
        assert_eq!(cfg.rule.kind, ShrinkKind::Visu);
        assert_eq!(cfg.rule.mode, ThresholdMode::Hard);
        assert_eq!(cfg.levels, 2);
        assert_eq!(cfg.smoothing_method, SmoothingMethod::Anisotropic);
        assert_eq!(cfg.bilateral.sigma_r(), 25.0);
        assert_eq!(cfg.bilateral.radius(), 4);
        assert_eq!(cfg.diffusion.iterations(), 8);
        assert_eq!(cfg.diffusion.conductance(), Conductance::Rational);
        assert_eq!(cfg.tone_order, ToneOrder::StretchThenEqualize);
        assert_eq!(cfg.histogram_bins, 32);
        assert_eq!(cfg.edge_low, 10.0);
    }

    #[test]
    fn unknown_key_is_rejected_with_line_number() {
        let err = parse_config("[wavelet]\nbnak = haar\n").unwrap_err();
        match err {
            Error::Config { line, reason } => {
                assert_eq!(line, Some(2));
                assert!(reason.contains("bnak"), "{reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(
            parse_config("[wavelet]\nbnak = haar\n").unwrap_err().exit_code(),
            2
        );
    }

    #[test]
    fn unknown_section_is_rejected() {
        assert!(parse_config("[wavelets]\n").is_err());
    }

    #[test]
    fn key_before_section_is_rejected() {
        assert!(parse_config("bank = haar\n").is_err());
    }

    #[test]
    fn malformed_values_are_rejected() {
        assert!(parse_config("[wavelet]\nlevels = three\n").is_err());
        assert!(parse_config("[wavelet]\nlevels = 0\n").is_err());
        assert!(parse_config("[homomorphic]\nenabled = maybe\n").is_err());
        assert!(parse_config("[smoothing]\nsigma_d = \n").is_err());
        assert!(parse_config("[metrics]\nhistogram_bins = 1\n").is_err());
    }

    #[test]
    fn invalid_parameter_combination_is_a_config_error() {
        // r_l above r_h passes the scan but fails validation.
        let err = parse_config("[homomorphic]\nr_h = 0.3\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = parse_config("[diffusion]\nlambda = 0.6\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn inverted_edge_thresholds_are_rejected() {
        assert!(parse_config("[metrics]\nedge_low = 90\nedge_high = 20\n").is_err());
    }

    #[test]
    fn section_and_keys_are_case_insensitive() {
        let cfg = parse_config("[Wavelet]\nBank = HAAR\n").unwrap();
        assert_eq!(cfg.bank, BankName::Haar);
    }
}
