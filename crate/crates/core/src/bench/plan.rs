use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identify::{IdentifyConfig, MAX_K};
use crate::model::{Case, NoiseFamily};

/// Smallest sample size a plan may request.
pub const MIN_SAMPLE_SIZE: usize = 500;

/// A simulation study. Cells are the cross product of cases (with their
/// latent counts), families, sample sizes and, when given, assumed counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPlan {
    pub cases: Vec<Case>,
    pub families: Vec<NoiseFamily>,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    /// Latent counts for case 3; cases 1 and 2 have fixed counts.
    #[serde(default = "default_latent_counts")]
    pub latent_counts: Vec<usize>,
    /// Run every cell once per assumed latent count instead of searching.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumed_counts: Option<Vec<usize>>,
    /// One cell across all families, each source drawing its own family.
    #[serde(default)]
    pub pool_families: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub config: IdentifyConfig,
}

fn default_latent_counts() -> Vec<usize> {
    vec![2]
}

impl BenchPlan {
    /// Cases 1 to 3 (two latents in case 3), all five families, sizes
    /// 5k, 10k and 50k, 100 replicates.
    pub fn table1() -> Self {
        Self {
            cases: vec![Case::One, Case::Two, Case::Three],
            families: NoiseFamily::ALL.to_vec(),
            sample_sizes: vec![5_000, 10_000, 50_000],
            replicates: 100,
            latent_counts: default_latent_counts(),
            assumed_counts: None,
            pool_families: false,
            seed: 0,
            config: IdentifyConfig::default(),
        }
    }

    /// [`BenchPlan::table1`] cut to 25 replicates and sizes up to 10k.
    pub fn fast() -> Self {
        Self {
            sample_sizes: vec![5_000, 10_000],
            replicates: 25,
            ..Self::table1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.cases.is_empty() || self.families.is_empty() || self.sample_sizes.is_empty() {
            return bad("cases, families and sample_sizes must be non-empty".into());
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < MIN_SAMPLE_SIZE) {
            return bad(format!("sample size {n} is below {MIN_SAMPLE_SIZE}"));
        }
        if self.cases.contains(&Case::Three) {
            if self.latent_counts.is_empty() {
                return bad("case 3 needs at least one latent count".into());
            }
            if let Some(&m) = self.latent_counts.iter().find(|&&m| m < 2) {
                return bad(format!("case 3 latent count must be at least 2, got {m}"));
            }
        }
        if let Some(assumed) = &self.assumed_counts {
            if assumed.is_empty() {
                return bad("assumed_counts, when given, must be non-empty".into());
            }
            if let Some(&a) = assumed.iter().find(|&&a| a + 2 > MAX_K) {
                return bad(format!(
                    "assumed count {a} exceeds the cap of {}",
                    MAX_K - 2
                ));
            }
        }
        self.config.validate()
    }

    /// `(case, m)` pairs in plan order.
    pub fn structures(&self) -> Vec<(Case, usize)> {
        let mut out = Vec::new();
        for &case in &self.cases {
            match case {
                Case::Three => out.extend(self.latent_counts.iter().map(|&m| (case, m))),
                _ => out.push((case, case.default_m())),
            }
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let plan: BenchPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let plan: BenchPlan = toml::from_str(text).map_err(|e| Error::Toml(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    /// Reads a plan, choosing the parser by file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("json") => Self::from_json_str(&text),
            Some("toml") => Self::from_toml_str(&text),
            other => Err(Error::UnsupportedFormat(other.unwrap_or("").to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_structures() {
        let plan = BenchPlan::table1();
        plan.validate().unwrap();
        assert_eq!(
            plan.structures(),
            vec![(Case::One, 0), (Case::Two, 1), (Case::Three, 2)]
        );
        let fast = BenchPlan::fast();
        assert!(fast.sample_sizes.iter().all(|&n| n <= 10_000));
        assert_eq!(fast.replicates, 25);
    }

    #[test]
    fn toml_and_json_plans() {
        let toml_text = r#"
            cases = [1, 3]
            families = ["laplace", "d4"]
            sample_sizes = [1000]
            replicates = 3
            latent_counts = [2, 3]
            seed = 5

            [config]
            epsilon = 1e-4
        "#;
        let plan = BenchPlan::from_toml_str(toml_text).unwrap();
        assert_eq!(
            plan.families,
            vec![NoiseFamily::Laplace, NoiseFamily::Exponential]
        );
        assert_eq!(plan.config.epsilon, 1e-4);
        assert_eq!(plan.config.k_max, IdentifyConfig::default().k_max);
        assert_eq!(plan.structures().len(), 3);
        let json = serde_json::to_string(&plan).unwrap();
        assert_eq!(BenchPlan::from_json_str(&json).unwrap(), plan);
    }

    #[test]
    fn invalid_plans() {
        let mut plan = BenchPlan::fast();
        plan.sample_sizes = vec![100];
        assert!(plan.validate().is_err());
        let mut plan = BenchPlan::fast();
        plan.replicates = 0;
        assert!(plan.validate().is_err());
        let mut plan = BenchPlan::fast();
        plan.latent_counts = vec![1];
        assert!(plan.validate().is_err());
        let mut plan = BenchPlan::fast();
        plan.assumed_counts = Some(vec![7]);
        assert!(plan.validate().is_err());
        assert!(matches!(
            BenchPlan::from_path(Path::new("plan.yaml")),
            Err(Error::Io(_)) | Err(Error::UnsupportedFormat(_))
        ));
    }
}
