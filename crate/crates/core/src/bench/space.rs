use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fusion::{FusionConfig, FusionMethod, StackingMethod, MAX_POSITIVE};
use crate::weights::WeightSet;

/// Which weight sets each method is run with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPolicy {
    /// The full set, then each admissible map dropped in turn.
    IncludeExclude,
    /// Only the method's full set.
    FullOnly,
}

impl WeightPolicy {
    pub fn weight_sets(self, method: FusionMethod) -> Vec<WeightSet> {
        match self {
            WeightPolicy::IncludeExclude => method.sweep_weight_sets(),
            WeightPolicy::FullOnly => vec![method.full_weights()],
        }
    }
}

impl fmt::Display for WeightPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightPolicy::IncludeExclude => "include-exclude",
            WeightPolicy::FullOnly => "full",
        })
    }
}

impl FromStr for WeightPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "include-exclude" => Ok(WeightPolicy::IncludeExclude),
            "full" => Ok(WeightPolicy::FullOnly),
            other => Err(Error::config(format!(
                "unknown weight policy {other:?}; expected include-exclude or full"
            ))),
        }
    }
}

/// A subset of the configuration space to sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpace {
    pub methods: Vec<FusionMethod>,
    pub n_positive: Vec<usize>,
    pub stackings: Vec<StackingMethod>,
    pub weight_policy: WeightPolicy,
}

impl SweepSpace {
    /// Every method, 1 to 5 EV-positive frames, every stacking, and the
    /// include/exclude weight protocol.
    pub fn full() -> Self {
        Self {
            methods: FusionMethod::ALL.to_vec(),
            n_positive: (1..=MAX_POSITIVE).collect(),
            stackings: StackingMethod::ALL.to_vec(),
            weight_policy: WeightPolicy::IncludeExclude,
        }
    }

    /// Sorts and deduplicates the lists and checks they are non-empty and in
    /// range.
    pub fn normalized(mut self) -> Result<Self> {
        self.methods.sort();
        self.methods.dedup();
        self.n_positive.sort();
        self.n_positive.dedup();
        self.stackings.sort();
        self.stackings.dedup();
        if self.methods.is_empty() || self.n_positive.is_empty() || self.stackings.is_empty() {
            return Err(Error::invalid("sweep space needs at least one method, frame count and stacking"));
        }
        if let Some(&n) = self.n_positive.iter().find(|&&n| !(1..=MAX_POSITIVE).contains(&n)) {
            return Err(Error::config(format!("frame count {n} outside 1..={MAX_POSITIVE}")));
        }
        Ok(self)
    }

    /// Parses a space file of `key = value` lines. Keys: `methods`, `frames`,
    /// `stackings` (comma lists) and `weights` (`include-exclude` or `full`).
    /// Missing keys keep their full-space value; `#` starts a comment.
    ///
    /// ```
    /// use fusionbench::bench::SweepSpace;
    /// let space = SweepSpace::parse("methods = fast-yuv\nframes = 1, 2\n").unwrap();
    /// assert_eq!(fusionbench::bench::enumerate_configs(&space).unwrap().len(), 12);
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut space = Self::full();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::config(format!("space line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            if seen.contains(&key.to_string()) {
                return Err(bad(format!("key {key:?} given twice")));
            }
            seen.push(key.to_string());
            let items = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            let wrap = |e: Error| bad(e.to_string());
            match key {
                "methods" => space.methods = items().map(str::parse).collect::<Result<_>>().map_err(wrap)?,
                "stackings" => space.stackings = items().map(str::parse).collect::<Result<_>>().map_err(wrap)?,
                "frames" => {
                    space.n_positive = items()
                        .map(|s| s.parse::<usize>().map_err(|_| bad(format!("bad frame count {s:?}"))))
                        .collect::<Result<_>>()?
                }
                "weights" => space.weight_policy = value.parse().map_err(wrap)?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        space.normalized().map_err(|e| match e {
            Error::InvalidInput(m) => Error::Config(m),
            e => e,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// `full` or a path to a space file.
    pub fn from_arg(arg: &str) -> Result<Self> {
        if arg == "full" {
            Ok(Self::full())
        } else {
            Self::from_file(arg)
        }
    }
}

/// All legal configurations of `space`, ordered by method, weight set,
/// frame count, then stacking. A single EV-positive frame only pairs with
/// no stacking.
pub fn enumerate_configs(space: &SweepSpace) -> Result<Vec<FusionConfig>> {
    let space = space.clone().normalized()?;
    let mut out = Vec::new();
    for &method in &space.methods {
        for weights in space.weight_policy.weight_sets(method) {
            for &n in &space.n_positive {
                for &stacking in &space.stackings {
                    if n == 1 && stacking != StackingMethod::None {
                        continue;
                    }
                    out.push(FusionConfig::new(method, weights, n, stacking)?);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::invalid(
            "sweep space has no legal configuration (stacking needs more than 1 EV>=0 frame)",
        ));
    }
    Ok(out)
}
