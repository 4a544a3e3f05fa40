//! INI-style scenario configuration: `key = value` lines, `#` comments.

use noonsim::ChannelModel;
use std::collections::BTreeMap;
use thiserror::Error;

/// A fully validated sweep scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub channel: ChannelModel,
    /// Photon / qubit count.
    pub n: usize,
    /// Interferometric phase in radians.
    pub phi: f64,
    pub t_max: f64,
    /// Number of grid points on `[0, t_max]`, endpoints included.
    pub steps: usize,
    /// Measurement repetitions entering the Cramér-Rao bound.
    pub repetitions: u32,
    /// Abort the sweep on the first complete-positivity violation.
    pub strict: bool,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key \"{0}\"")]
    MissingKey(&'static str),
    #[error("{0}")]
    Invalid(String),
}

const KNOWN_KEYS: &[&str] = &[
    "channel", "n", "phi", "t_max", "steps", "gamma1", "gamma2", "gamma0", "lambda", "delta",
    "omega", "repetitions", "strict",
];

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut values: BTreeMap<&str, (String, usize)> = BTreeMap::new();

    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Line {
            line: line_no,
            message: format!("expected `key = value`, got \"{line}\""),
        })?;
        let key = key.trim();
        let value = value.trim();
        let known = KNOWN_KEYS
            .iter()
            .find(|&&k| k == key)
            .ok_or_else(|| ConfigError::Line {
                line: line_no,
                message: format!("unknown key \"{key}\""),
            })?;
        if value.is_empty() {
            return Err(ConfigError::Line {
                line: line_no,
                message: format!("key \"{key}\" has no value"),
            });
        }
        if let Some((_, first_line)) = values.get(known) {
            return Err(ConfigError::Line {
                line: line_no,
                message: format!("duplicate key \"{key}\" (first set on line {first_line})"),
            });
        }
        values.insert(known, (value.to_string(), line_no));
    }

    build(values)
}

fn build(values: BTreeMap<&str, (String, usize)>) -> Result<ScenarioConfig, ConfigError> {
    let parse_f64 = |key: &'static str| -> Result<Option<f64>, ConfigError> {
        values
            .get(key)
            .map(|(v, line)| {
                v.parse::<f64>().map_err(|_| ConfigError::Line {
                    line: *line,
                    message: format!("key \"{key}\": \"{v}\" is not a number"),
                })
            })
            .transpose()
    };
    let require_f64 = |key: &'static str| -> Result<f64, ConfigError> {
        parse_f64(key)?.ok_or(ConfigError::MissingKey(key))
    };

    let channel_name = values
        .get("channel")
        .map(|(v, _)| v.as_str())
        .ok_or(ConfigError::MissingKey("channel"))?;

    let channel = match channel_name {
        "dephasing" => ChannelModel::Dephasing { gamma1: require_f64("gamma1")? },
        "depolarization" => ChannelModel::Depolarization {
            gamma1: require_f64("gamma1")?,
            gamma2: require_f64("gamma2")?,
        },
        "spontaneous" => ChannelModel::SpontaneousEmission {
            gamma1: require_f64("gamma1")?,
            gamma2: require_f64("gamma2")?,
        },
        "lorentzian" => ChannelModel::LorentzianReservoir {
            gamma0: require_f64("gamma0")?,
            lambda_w: require_f64("lambda")?,
            omega0: 0.0,
        },
        "gad" => ChannelModel::GeneralizedAmplitudeDamping {
            delta: require_f64("delta")?,
            omega: require_f64("omega")?,
        },
        other => {
            let (_, line) = values["channel"];
            return Err(ConfigError::Line {
                line,
                message: format!(
                    "unknown channel \"{other}\" (expected dephasing, depolarization, \
                     spontaneous, lorentzian, or gad)"
                ),
            });
        }
    };

    // Rate keys that belong to other families are configuration mistakes.
    let allowed_rates: &[&str] = match channel_name {
        "dephasing" => &["gamma1"],
        "depolarization" | "spontaneous" => &["gamma1", "gamma2"],
        "lorentzian" => &["gamma0", "lambda"],
        _ => &["delta", "omega"],
    };
    for rate_key in ["gamma1", "gamma2", "gamma0", "lambda", "delta", "omega"] {
        if let Some((_, line)) = values.get(rate_key) {
            if !allowed_rates.contains(&rate_key) {
                return Err(ConfigError::Line {
                    line: *line,
                    message: format!(
                        "key \"{rate_key}\" does not apply to channel \"{channel_name}\""
                    ),
                });
            }
        }
    }

    channel
        .validate()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let n = match values.get("n") {
        Some((v, line)) => v.parse::<usize>().map_err(|_| ConfigError::Line {
            line: *line,
            message: format!("key \"n\": \"{v}\" is not a positive integer"),
        })?,
        None => return Err(ConfigError::MissingKey("n")),
    };
    if n == 0 {
        return Err(ConfigError::Invalid("n must be >= 1".into()));
    }

    let t_max = require_f64("t_max")?;
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(ConfigError::Invalid(format!("t_max must be > 0, got {t_max}")));
    }

    let steps = match values.get("steps") {
        Some((v, line)) => v.parse::<usize>().map_err(|_| ConfigError::Line {
            line: *line,
            message: format!("key \"steps\": \"{v}\" is not a positive integer"),
        })?,
        None => return Err(ConfigError::MissingKey("steps")),
    };
    if steps < 2 {
        return Err(ConfigError::Invalid(format!("steps must be >= 2, got {steps}")));
    }

    let phi = parse_f64("phi")?.unwrap_or(0.0);

    let repetitions = match values.get("repetitions") {
        Some((v, line)) => {
            let m = v.parse::<u32>().map_err(|_| ConfigError::Line {
                line: *line,
                message: format!("key \"repetitions\": \"{v}\" is not a positive integer"),
            })?;
            if m == 0 {
                return Err(ConfigError::Invalid("repetitions must be >= 1".into()));
            }
            m
        }
        None => 1,
    };

    let strict = match values.get("strict") {
        Some((v, line)) => match v.as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(ConfigError::Line {
                    line: *line,
                    message: format!("key \"strict\": expected true or false, got \"{other}\""),
                })
            }
        },
        None => false,
    };

    Ok(ScenarioConfig { channel, n, phi, t_max, steps, repetitions, strict })
}
