//! Grouped observations, optionally laid out as a 2x2 factorial design.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One sample: a label, its observations, and an optional `(a, b)` factor
/// level pair for factorial layouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub label: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<(String, String)>,
}

impl Group {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Group {
            label: label.into(),
            values,
            factors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `d >= 2` independent samples with finite values.
///
/// For 2x2 designs the groups are stored in the cell order
/// `(a1,b1), (a1,b2), (a2,b1), (a2,b2)`, which is the order the built-in
/// contrasts `A = (1,1,-1,-1)`, `B = (1,-1,1,-1)` and `AB = (1,-1,-1,1)`
/// refer to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedData {
    groups: Vec<Group>,
}

impl GroupedData {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::invalid(format!(
                "at least two groups are required, got {}",
                groups.len()
            )));
        }
        for g in &groups {
            if g.values.is_empty() {
                return Err(Error::invalid(format!("group '{}' is empty", g.label)));
            }
            if let Some(v) = g.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::invalid(format!(
                    "group '{}' contains a non-finite value ({v})",
                    g.label
                )));
            }
        }
        let with_factors = groups.iter().filter(|g| g.factors.is_some()).count();
        if with_factors != 0 && with_factors != groups.len() {
            return Err(Error::invalid(
                "factor labels must be present on all groups or on none",
            ));
        }
        let data = GroupedData { groups };
        if with_factors != 0 {
            data.check_factorial()?;
        }
        Ok(data)
    }

    /// Groups labelled `1..=d`.
    pub fn from_values(samples: Vec<Vec<f64>>) -> Result<Self> {
        let groups = samples
            .into_iter()
            .enumerate()
            .map(|(i, v)| Group::new((i + 1).to_string(), v))
            .collect();
        Self::new(groups)
    }

    /// A 2x2 layout from cells given in the order `11, 12, 21, 22`.
    pub fn factorial(cells: [Vec<f64>; 4]) -> Result<Self> {
        let levels = [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")];
        let groups = cells
            .into_iter()
            .zip(levels)
            .map(|(values, (a, b))| Group {
                label: format!("{a}{b}"),
                values,
                factors: Some((a.to_string(), b.to_string())),
            })
            .collect();
        Self::new(groups)
    }

    fn check_factorial(&self) -> Result<()> {
        if self.groups.len() != 4 {
            return Err(Error::invalid(format!(
                "a 2x2 layout needs exactly 4 cells, got {}",
                self.groups.len()
            )));
        }
        let f: Vec<&(String, String)> = self
            .groups
            .iter()
            .map(|g| g.factors.as_ref().expect("checked by caller"))
            .collect();
        let (a1, b1) = (&f[0].0, &f[0].1);
        let (a2, b2) = (&f[3].0, &f[3].1);
        let crossed = a1 != a2
            && b1 != b2
            && f[1].0 == *a1
            && f[1].1 == *b2
            && f[2].0 == *a2
            && f[2].1 == *b1;
        if !crossed {
            return Err(Error::invalid(
                "factor labels do not form a full 2x2 cross in the order 11, 12, 21, 22",
            ));
        }
        Ok(())
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Group::len).collect()
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(Group::len).sum()
    }

    pub fn is_balanced(&self) -> bool {
        let n = self.groups[0].len();
        self.groups.iter().all(|g| g.len() == n)
    }

    pub fn is_factorial(&self) -> bool {
        self.groups.iter().all(|g| g.factors.is_some())
    }

    pub fn all_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.groups.iter().flat_map(|g| g.values.iter().copied())
    }

    /// Applies `f` to every observation, keeping labels and layout.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let groups = self
            .groups
            .iter()
            .map(|g| Group {
                label: g.label.clone(),
                values: g.values.iter().map(|&v| f(v)).collect(),
                factors: g.factors.clone(),
            })
            .collect();
        Self::new(groups)
    }
}
