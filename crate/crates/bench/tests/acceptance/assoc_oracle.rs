//! Brute-force dense-map model of the associative-array operations.
//!
//! The model stores entries in a plain `(row, col) -> value` map and
//! re-implements every operation independently, the slow obvious way.
//! Test values are dyadic rationals, so every sum and product is exact in
//! f64 and results can be compared bit-for-bit regardless of accumulation
//! order.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tablestack_assoc::{AssocArray, CollisionPolicy, Triple, Value};

pub type Model = BTreeMap<(String, String), Value>;

pub fn assert_matches(arr: &AssocArray, model: &Model, what: &str) {
    arr.validate().unwrap_or_else(|e| panic!("{what}: invalid result: {e}"));
    let got: Model = arr
        .iter()
        .map(|(r, c, v)| ((r.to_string(), c.to_string()), v.clone()))
        .collect();
    assert_eq!(&got, model, "{what}: result disagrees with the dense model");
}

pub fn model_of(triples: &[Triple]) -> Model {
    let mut m = Model::new();
    for t in triples {
        m.insert((t.row.clone(), t.col.clone()), t.val.clone());
    }
    m
}

pub fn model_sum(triples: &[Triple]) -> Model {
    let mut m = Model::new();
    for t in triples {
        let key = (t.row.clone(), t.col.clone());
        let prev = m.get(&key).and_then(Value::as_num).unwrap_or(0.0);
        let sum = prev + t.val.as_num().expect("sum model is numeric");
        if sum == 0.0 {
            m.remove(&key);
        } else {
            m.insert(key, Value::num(sum));
        }
    }
    m
}

fn rows_of(m: &Model) -> BTreeSet<String> {
    m.keys().map(|(r, _)| r.clone()).collect()
}

pub fn retain_rows(m: &Model, keep: impl Fn(&str) -> bool) -> Model {
    m.iter()
        .filter(|((r, _), _)| keep(r))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

pub fn rows_by_position(m: &Model, start: usize, stop: usize) -> Model {
    let rows: Vec<String> = rows_of(m).into_iter().collect();
    let picked: BTreeSet<&String> = rows
        .iter()
        .skip(start - 1)
        .take(stop + 1 - start)
        .collect();
    retain_rows(m, |r| picked.contains(&r.to_string()))
}

pub fn filter_value(m: &Model, v: &Value) -> Model {
    m.iter()
        .filter(|(_, val)| *val == v)
        .map(|(k, val)| (k.clone(), val.clone()))
        .collect()
}

pub fn project(m: &Model) -> Model {
    m.iter()
        .map(|(k, v)| {
            let out = match v {
                Value::Text(_) => Value::num(1.0),
                Value::Num(x) => Value::num(*x),
            };
            (k.clone(), out)
        })
        .collect()
}

pub fn merge(a: &Model, b: &Model, sign: f64) -> Model {
    let (a, b) = (project(a), project(b));
    let mut keys: BTreeSet<(String, String)> = a.keys().cloned().collect();
    keys.extend(b.keys().cloned());
    let mut out = Model::new();
    for k in keys {
        let va = a.get(&k).and_then(Value::as_num).unwrap_or(0.0);
        let vb = b.get(&k).and_then(Value::as_num).unwrap_or(0.0);
        let sum = va + sign * vb;
        if sum != 0.0 {
            out.insert(k, Value::num(sum));
        }
    }
    out
}

pub fn and(a: &Model, b: &Model) -> Model {
    a.keys()
        .filter(|k| b.contains_key(*k))
        .map(|k| (k.clone(), Value::num(1.0)))
        .collect()
}

pub fn or(a: &Model, b: &Model) -> Model {
    a.keys()
        .chain(b.keys())
        .map(|k| (k.clone(), Value::num(1.0)))
        .collect()
}

pub fn matmul(a: &Model, b: &Model) -> Model {
    let (a, b) = (project(a), project(b));
    let a_rows: BTreeSet<String> = a.keys().map(|(r, _)| r.clone()).collect();
    let shared: BTreeSet<String> = a.keys().map(|(_, c)| c.clone()).collect();
    let b_cols: BTreeSet<String> = b.keys().map(|(_, c)| c.clone()).collect();
    let mut out = Model::new();
    for r in &a_rows {
        for c in &b_cols {
            let mut sum = 0.0;
            for k in &shared {
                let va = a.get(&(r.clone(), k.clone())).and_then(Value::as_num);
                let vb = b.get(&(k.clone(), c.clone())).and_then(Value::as_num);
                if let (Some(va), Some(vb)) = (va, vb) {
                    sum += va * vb;
                }
            }
            if sum != 0.0 {
                out.insert((r.clone(), c.clone()), Value::num(sum));
            }
        }
    }
    out
}

pub fn transpose(m: &Model) -> Model {
    m.iter()
        .map(|((r, c), v)| ((c.clone(), r.clone()), v.clone()))
        .collect()
}

pub fn bfs_step(m: &Model, frontier: &[String]) -> Model {
    let fset: BTreeSet<&str> = frontier.iter().map(|s| s.as_str()).collect();
    let p = project(m);
    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    for ((r, c), v) in &p {
        if fset.contains(r.as_str()) {
            *sums.entry(c.clone()).or_insert(0.0) += v.as_num().unwrap();
        }
    }
    sums.into_iter()
        .filter(|(_, sum)| *sum != 0.0)
        .map(|(c, sum)| (("frontier".to_string(), c), Value::num(sum)))
        .collect()
}

pub fn row_offset(m: &Model, offset: u64, width: usize) -> Model {
    m.iter()
        .map(|((r, c), v)| {
            let id: u64 = r.parse().expect("numeric row keys");
            (
                (format!("{:0width$}", id + offset), c.clone()),
                v.clone(),
            )
        })
        .collect()
}

// Random inputs. One value kind per array; numeric values are dyadic so all
// downstream arithmetic is exact.

pub const NUMERIC_POOL: [f64; 6] = [1.0, 2.0, -1.0, 3.5, 0.25, 47.0];
pub const TEXT_POOL: [&str; 3] = ["cited", "knows", "likes"];

pub fn random_triples(rng: &mut ChaCha8Rng, max_dim: usize, textual: bool) -> Vec<Triple> {
    let n = rng.gen_range(0..=3 * max_dim);
    (0..n)
        .map(|_| {
            let row = format!("r{:02}", rng.gen_range(0..max_dim));
            let col = format!("c{:02}", rng.gen_range(0..max_dim));
            let val = if textual {
                Value::text(*TEXT_POOL.choose(rng).unwrap())
            } else {
                Value::num(*NUMERIC_POOL.choose(rng).unwrap())
            };
            Triple::new(row, col, val)
        })
        .collect()
}

pub fn random_array(rng: &mut ChaCha8Rng, max_dim: usize) -> (AssocArray, Model) {
    let textual = rng.gen_bool(0.3);
    let triples = random_triples(rng, max_dim, textual);
    let arr = AssocArray::from_triples(&triples, CollisionPolicy::KeepLast).unwrap();
    (arr, model_of(&triples))
}

/// Numeric-row-keyed random array for the re-keying operation.
pub fn random_numeric_keyed(rng: &mut ChaCha8Rng) -> (AssocArray, Model) {
    let triples: Vec<Triple> = (0..rng.gen_range(0..48))
        .map(|_| {
            Triple::new(
                format!("{:04}", rng.gen_range(0..512)),
                format!("c{:02}", rng.gen_range(0..16)),
                Value::num(*NUMERIC_POOL.choose(rng).unwrap()),
            )
        })
        .collect();
    let arr = AssocArray::from_triples(&triples, CollisionPolicy::KeepLast).unwrap();
    (arr, model_of(&triples))
}
