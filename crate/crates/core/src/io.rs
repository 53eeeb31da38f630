//! Long-format CSV data files and analytic scenario files.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::analytic::{Allocation, DistributionSpec, Quantity};
use crate::data::{Group, GroupedData};
use crate::error::{Error, Result};

/// Reads a long-format CSV with header `group,value` (one-way) or
/// `a,b,value` (2x2). Groups keep their order of first appearance; 2x2 cells
/// are arranged as `(a1,b1), (a1,b2), (a2,b1), (a2,b2)` with levels also in
/// order of first appearance.
pub fn read_long_csv<R: Read>(reader: R) -> Result<GroupedData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let value_col = col("value").ok_or(Error::Data {
        line: 1,
        message: "header must contain a 'value' column".into(),
    })?;
    let layout = match (col("group"), col("a"), col("b")) {
        (Some(g), _, _) => Layout::OneWay(g),
        (None, Some(a), Some(b)) => Layout::TwoByTwo(a, b),
        _ => {
            return Err(Error::Data {
                line: 1,
                message: "header must be 'group,value' or 'a,b,value'".into(),
            })
        }
    };

    let mut keys: Vec<(String, String)> = Vec::new();
    let mut index: HashMap<(String, String), usize> = HashMap::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize, what: &str| -> Result<String> {
            match rec.get(i) {
                Some(s) if !s.is_empty() => Ok(s.to_string()),
                _ => Err(Error::Data {
                    line,
                    message: format!("empty {what} field"),
                }),
            }
        };
        let raw = field(value_col, "value")?;
        let v: f64 = raw.parse().map_err(|_| Error::Data {
            line,
            message: format!("value '{raw}' is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Data {
                line,
                message: format!("value '{raw}' is not finite"),
            });
        }
        let key = match layout {
            Layout::OneWay(g) => (field(g, "group")?, String::new()),
            Layout::TwoByTwo(a, b) => (field(a, "a")?, field(b, "b")?),
        };
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            values.push(Vec::new());
            values.len() - 1
        });
        values[slot].push(v);
    }
    if keys.is_empty() {
        return Err(Error::Data {
            line: 1,
            message: "no data rows".into(),
        });
    }

    match layout {
        Layout::OneWay(_) => GroupedData::new(
            keys.into_iter()
                .zip(values)
                .map(|((g, _), v)| Group::new(g, v))
                .collect(),
        ),
        Layout::TwoByTwo(..) => {
            let mut a_levels: Vec<&str> = Vec::new();
            let mut b_levels: Vec<&str> = Vec::new();
            for (a, b) in &keys {
                if !a_levels.contains(&a.as_str()) {
                    a_levels.push(a);
                }
                if !b_levels.contains(&b.as_str()) {
                    b_levels.push(b);
                }
            }
            if a_levels.len() != 2 || b_levels.len() != 2 {
                return Err(Error::invalid(format!(
                    "a 2x2 file needs exactly two levels per factor (a: {}, b: {})",
                    a_levels.len(),
                    b_levels.len()
                )));
            }
            let mut groups = Vec::with_capacity(4);
            for a in &a_levels {
                for b in &b_levels {
                    let key = (a.to_string(), b.to_string());
                    let slot = index.get(&key).ok_or_else(|| {
                        Error::invalid(format!("cell a={a}, b={b} has no observations"))
                    })?;
                    groups.push(Group {
                        label: format!("{a}:{b}"),
                        values: values[*slot].clone(),
                        factors: Some(key),
                    });
                }
            }
            GroupedData::new(groups)
        }
    }
}

enum Layout {
    OneWay(usize),
    TwoByTwo(usize, usize),
}

/// Writes grouped data back to long format.
pub fn write_long_csv(data: &GroupedData) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if data.is_factorial() {
        w.write_record(["a", "b", "value"])?;
        for g in data.groups() {
            let (a, b) = g.factors.as_ref().expect("factorial");
            for v in &g.values {
                w.write_record([a.as_str(), b.as_str(), &v.to_string()])?;
            }
        }
    } else {
        w.write_record(["group", "value"])?;
        for g in data.groups() {
            for v in &g.values {
                w.write_record([g.label.as_str(), &v.to_string()])?;
            }
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedAllocation {
    pub label: String,
    pub sizes: Allocation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    /// `(n21, n22)`
    pub fixed: (u64, u64),
    /// values of `n11 = n12`
    pub growing: Vec<u64>,
    pub contrast: Vec<f64>,
}

/// Analytic scenario: distributions plus one or more allocations and
/// optional trend / contrast vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub specs: Vec<DistributionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<Allocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocations: Option<Vec<NamedAllocation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<Vec<Quantity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<Vec<Quantity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_total: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        for s in &self.specs {
            s.validate()?;
        }
        if self.allocation.is_none() && self.allocations.is_none() && self.subgroup.is_none() {
            return Err(Error::invalid(
                "scenario needs 'allocation', 'allocations' or 'subgroup'",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_way_file() {
        let csv = "group,value\nx,1\ny,2\nx,3\n";
        let d = read_long_csv(csv.as_bytes()).unwrap();
        assert_eq!(d.groups()[0].label, "x");
        assert_eq!(d.groups()[0].values, vec![1.0, 3.0]);
        assert_eq!(d.groups()[1].values, vec![2.0]);
    }

    #[test]
    fn two_by_two_file_orders_cells() {
        let csv = "a,b,value\np,u,1\nq,v,4\np,v,2\nq,u,3\np,u,1.5\n";
        let d = read_long_csv(csv.as_bytes()).unwrap();
        let labels: Vec<&str> = d.groups().iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["p:u", "p:v", "q:u", "q:v"]);
        assert_eq!(d.groups()[0].values, vec![1.0, 1.5]);
        assert!(d.is_factorial());
    }

    #[test]
    fn errors_name_the_line() {
        let csv = "group,value\nx,1\ny,\n";
        match read_long_csv(csv.as_bytes()) {
            Err(Error::Data { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("empty value"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let csv = "group,value\nx,1\ny,abc\n";
        assert!(matches!(
            read_long_csv(csv.as_bytes()),
            Err(Error::Data { line: 3, .. })
        ));
        assert!(read_long_csv("foo,bar\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn incomplete_cross_is_rejected() {
        let csv = "a,b,value\np,u,1\np,v,2\nq,u,3\nr,v,4\n";
        assert!(read_long_csv(csv.as_bytes()).is_err());
        let csv = "a,b,value\np,u,1\np,v,2\nq,u,3\n";
        assert!(read_long_csv(csv.as_bytes()).is_err());
    }

    #[test]
    fn write_then_read() {
        let d = GroupedData::factorial([vec![1.0], vec![2.0, 2.5], vec![3.0], vec![4.0]]).unwrap();
        let back = read_long_csv(write_long_csv(&d).unwrap().as_bytes()).unwrap();
        assert_eq!(back.sizes(), d.sizes());
        assert_eq!(back.groups()[1].values, vec![2.0, 2.5]);
    }
}
