//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are skipped. Every key maps onto a
//! model parameter, the scenario selection, or an output setting; anything
//! else is an error.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use normsim::{BudgetRule, Environment, ModelParams, NormFormula, NormPair, Scenario};

pub const KEYS: [&str; 18] = [
    "scenario",
    "environments",
    "seed",
    "replicates",
    "out_dir",
    "numagents",
    "steps",
    "numpeers",
    "dist",
    "kappa",
    "tau",
    "wage",
    "h",
    "budget_rule",
    "norm_formula",
    "initial_norm_cooperation",
    "initial_norm_shirking",
    "zero_offsets",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub scenario: Option<Scenario>,
    pub environments: Vec<Environment>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            scenario: None,
            environments: vec![Environment::Global],
            seed: None,
            replicates: None,
            out_dir: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("`{key}`: cannot parse `{value}`: {e}"))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{line}`", n + 1))?;
            cfg.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", n + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "scenario" => self.scenario = Some(value.parse()?),
            "environments" | "environment" => {
                self.environments = list(value).map(str::parse).collect::<Result<_, _>>()?;
                if self.environments.is_empty() {
                    bail!("`{key}` needs at least one environment");
                }
            }
            "seed" => self.seed = Some(num(key, value)?),
            "replicates" => self.replicates = Some(num(key, value)?),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "numagents" => p.numagents = num(key, value)?,
            "steps" => p.steps = num(key, value)?,
            "numpeers" => p.numpeers = num(key, value)?,
            "dist" => {
                let shares: Vec<f64> = list(value).map(|v| num(key, v)).collect::<Result<_>>()?;
                p.dist = shares
                    .try_into()
                    .map_err(|v: Vec<f64>| anyhow!("`dist` needs four shares (C, O, SE, ST), got {}", v.len()))?;
            }
            "kappa" => p.kappa = num(key, value)?,
            "tau" => p.tau = num(key, value)?,
            "wage" => p.wage = num(key, value)?,
            "h" => p.h = num(key, value)?,
            "budget_rule" => p.budget_rule = value.parse::<BudgetRule>()?,
            "norm_formula" => p.norm_formula = value.parse::<NormFormula>()?,
            "initial_norm_cooperation" => {
                let start = p.starting_norms();
                p.initial_norms = Some(NormPair::new(num(key, value)?, start.shirking));
            }
            "initial_norm_shirking" => {
                let start = p.starting_norms();
                p.initial_norms = Some(NormPair::new(start.cooperation, num(key, value)?));
            }
            "zero_offsets" => p.zero_offsets = num(key, value)?,
            _ => bail!("unknown key `{key}` (known keys: {})", KEYS.join(", ")),
        }
        Ok(())
    }

    /// Applies `KEY=VALUE` overrides in order.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| anyhow!("override `{o}` is not of the form KEY=VALUE"))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_model_defaults() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg.params, ModelParams::default());
        assert_eq!(cfg.environments, vec![Environment::Global]);
    }

    #[test]
    fn parses_all_kinds_of_values() {
        let text = "\
# reference run
scenario = trustcoop
environments = global, neighbours
seed = 7
replicates=12
out_dir = results/a
dist = 0.7, 0.1, 0.1, 0.1
kappa = 1   # fully interdependent
h = 0.5
budget_rule = shirk-first
norm_formula = literal
initial_norm_shirking = 2.5
zero_offsets = true
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.scenario, Some(Scenario::Trustcoop));
        assert_eq!(cfg.environments, vec![Environment::Global, Environment::Neighbours]);
        assert_eq!((cfg.seed, cfg.replicates), (Some(7), Some(12)));
        assert_eq!(cfg.out_dir, Some(PathBuf::from("results/a")));
        assert_eq!(cfg.params.dist, [0.7, 0.1, 0.1, 0.1]);
        assert_eq!((cfg.params.kappa, cfg.params.h), (1.0, 0.5));
        assert_eq!(cfg.params.budget_rule, BudgetRule::ShirkFirst);
        assert_eq!(cfg.params.norm_formula, NormFormula::Literal);
        assert_eq!(cfg.params.initial_norms, Some(NormPair::new(10.0 / 3.0, 2.5)));
        assert!(cfg.params.zero_offsets);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        let err = RunConfig::parse("kappa = 0.5\nkapa = 0.4\n").unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("line 2") && msg.contains("unknown key `kapa`"), "{msg}");
        assert!(RunConfig::parse("just words").is_err());
        assert!(RunConfig::parse("dist = 0.5, 0.5").is_err());
        assert!(RunConfig::parse("scenario = laissez-faire").is_err());
        assert!(RunConfig::parse("steps = many").is_err());
    }

    #[test]
    fn overrides_apply_last() {
        let mut cfg = RunConfig::parse("h = 0.5").unwrap();
        cfg.apply_overrides(&["h=1.0".into(), "steps = 20".into()]).unwrap();
        assert_eq!((cfg.params.h, cfg.params.steps), (1.0, 20));
        assert!(cfg.apply_overrides(&["nonsense".into()]).is_err());
    }
}
