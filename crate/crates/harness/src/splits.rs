use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Sample;
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Train on one group per class, test on the rest; one split per group.
    GroupedOneTrain,
    /// Stratified 50/50 splits drawn from a seeded generator.
    RandomHalf,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::GroupedOneTrain => "grouped",
            Protocol::RandomHalf => "half",
        })
    }
}

impl FromStr for Protocol {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grouped" | "grouped_one_train" => Ok(Protocol::GroupedOneTrain),
            "half" | "random_half" => Ok(Protocol::RandomHalf),
            _ => Err(HarnessError::usage(format!("unknown protocol `{s}` (expected grouped or half)"))),
        }
    }
}

/// Indices into the sample list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub id: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn by_label(samples: &[Sample]) -> BTreeMap<&str, Vec<usize>> {
    let mut out: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        out.entry(s.label.as_str()).or_default().push(i);
    }
    out
}

/// Builds train/test splits. `rounds` only applies to [`Protocol::RandomHalf`].
pub fn make_splits(samples: &[Sample], protocol: Protocol, rounds: usize, seed: u64) -> Result<Vec<Split>> {
    let classes = by_label(samples);
    if classes.len() < 2 {
        return Err(HarnessError::data("splitting needs at least 2 classes"));
    }
    let splits = match protocol {
        Protocol::GroupedOneTrain => grouped(samples, &classes)?,
        Protocol::RandomHalf => random_half(&classes, rounds, seed)?,
    };
    for split in &splits {
        check_leakage(samples, split)?;
    }
    Ok(splits)
}

fn grouped(samples: &[Sample], classes: &BTreeMap<&str, Vec<usize>>) -> Result<Vec<Split>> {
    let mut groups_of: BTreeMap<&str, BTreeMap<&str, Vec<usize>>> = BTreeMap::new();
    for (label, idx) in classes {
        let entry = groups_of.entry(label).or_default();
        for &i in idx {
            let group = samples[i].group.as_deref().ok_or_else(|| {
                HarnessError::data(format!("grouped protocol needs group folders, but {} has none", samples[i].path))
            })?;
            entry.entry(group).or_default().push(i);
        }
    }
    let counts: BTreeSet<usize> = groups_of.values().map(BTreeMap::len).collect();
    if counts.len() != 1 {
        return Err(HarnessError::data(format!(
            "grouped protocol needs the same number of groups in every class, found {counts:?}"
        )));
    }
    let n_groups = *counts.iter().next().expect("non-empty");
    if n_groups < 2 {
        return Err(HarnessError::data("grouped protocol needs at least 2 groups per class"));
    }
    Ok((0..n_groups)
        .map(|g| {
            let mut train = Vec::new();
            let mut test = Vec::new();
            for groups in groups_of.values() {
                for (j, idx) in groups.values().enumerate() {
                    if j == g {
                        train.extend(idx);
                    } else {
                        test.extend(idx);
                    }
                }
            }
            Split { id: g, train, test }
        })
        .collect())
}

fn random_half(classes: &BTreeMap<&str, Vec<usize>>, rounds: usize, seed: u64) -> Result<Vec<Split>> {
    if rounds == 0 {
        return Err(HarnessError::usage("rounds must be at least 1"));
    }
    if let Some((label, idx)) = classes.iter().find(|(_, idx)| idx.len() < 2) {
        return Err(HarnessError::data(format!(
            "random_half needs at least 2 images per class; `{label}` has {}",
            idx.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..rounds)
        .map(|id| {
            let mut train = Vec::new();
            let mut test = Vec::new();
            for idx in classes.values() {
                let mut shuffled = idx.clone();
                shuffled.shuffle(&mut rng);
                let (a, b) = shuffled.split_at(idx.len() / 2);
                train.extend(a);
                test.extend(b);
            }
            train.sort_unstable();
            test.sort_unstable();
            Split { id, train, test }
        })
        .collect())
}

/// Fails if any image path appears on both sides of `split`.
pub fn check_leakage(samples: &[Sample], split: &Split) -> Result<()> {
    let train: HashSet<&str> = split.train.iter().map(|&i| samples[i].path.as_str()).collect();
    if let Some(&i) = split.test.iter().find(|&&i| train.contains(samples[i].path.as_str())) {
        return Err(HarnessError::data(format!(
            "split {} leaks {} into both train and test",
            split.id, samples[i].path
        )));
    }
    Ok(())
}
