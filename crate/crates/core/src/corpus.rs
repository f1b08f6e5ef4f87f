//! Named group constructors, the built-in corpus, and JSONL scan records.

use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, gcd, is_prime};
use crate::invariants::class_size_set;
use crate::perm::{Group, GroupError, GrpFile, Permutation};
use crate::theorem::{verify_main_theorem, LemmaConfig, TheoremReport, VerifyConfig};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("invalid group spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: line {line}: {message}")]
    Record {
        path: String,
        line: usize,
        message: String,
    },
}

fn io_error(path: &Path, e: impl fmt::Display) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// A recipe for a permutation group, written as `kind:params`.
///
/// `direct:` lists its factors joined by `+` and is kept flat: a direct
/// factor is never itself a direct product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    Symmetric(u32),
    Alternating(u32),
    Heisenberg(u32),
    Frobenius(u32, u32),
    Direct(Vec<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    /// Direct product of `factors`, flattening nested products.
    pub fn direct(factors: impl IntoIterator<Item = GroupSpec>) -> GroupSpec {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                GroupSpec::Direct(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        GroupSpec::Direct(flat)
    }

    pub fn build(&self, cap: usize) -> Result<Group, CorpusError> {
        let group = match *self {
            GroupSpec::Cyclic(n) => generated(n as usize, vec![shift_cycle(n as usize)], cap)?,
            GroupSpec::Dihedral(n) => {
                let n = n as usize;
                let reflection = (0..n).map(|i| ((n - i) % n) as u32).collect();
                generated(
                    n,
                    vec![shift_cycle(n), Permutation::from_images(reflection)?],
                    cap,
                )?
            }
            GroupSpec::Symmetric(n) => {
                let n = n as usize;
                let mut gens = vec![shift_cycle(n)];
                if n >= 2 {
                    gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
                }
                generated(n, gens, cap)?
            }
            GroupSpec::Alternating(n) => {
                let gens = (2..n)
                    .map(|k| Permutation::from_cycles(n as usize, &[&[0, 1, k]]))
                    .collect::<Result<_, _>>()?;
                generated(n as usize, gens, cap)?
            }
            GroupSpec::Heisenberg(p) => heisenberg(p as usize, cap)?,
            GroupSpec::Frobenius(p, q) => {
                let m = frobenius_multiplier(p as u64, q as u64).expect("validated spec");
                let scale = (0..p as u64).map(|i| (i * m % p as u64) as u32).collect();
                generated(
                    p as usize,
                    vec![shift_cycle(p as usize), Permutation::from_images(scale)?],
                    cap,
                )?
            }
            GroupSpec::Direct(ref factors) => {
                let mut iter = factors.iter();
                let Some(first) = iter.next() else {
                    return Ok(Group::trivial(1));
                };
                let mut product = first.build(cap)?;
                for f in iter {
                    product = Group::direct_product(&product, &f.build(cap)?, cap)?;
                }
                product
            }
            GroupSpec::File(ref path) => GrpFile::read(path)?.build(cap)?,
        };
        Ok(group)
    }
}

fn generated(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<Group, GroupError> {
    Group::from_generators(degree.max(1), &gens, cap)
}

/// `i ↦ i + 1 mod n`.
fn shift_cycle(n: usize) -> Permutation {
    Permutation::from_images_unchecked((0..n).map(|i| ((i + 1) % n) as u32).collect())
}

/// Regular representation of the order-`p³` group on triples `(a, b, c)`
/// with `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`.
fn heisenberg(p: usize, cap: usize) -> Result<Group, GroupError> {
    let index = |a: usize, b: usize, c: usize| ((a % p) * p * p + (b % p) * p + c % p) as u32;
    let mut right_x = Vec::with_capacity(p * p * p);
    let mut right_y = Vec::with_capacity(p * p * p);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                right_x.push(index(a + 1, b, c));
                right_y.push(index(a, b + 1, c + a));
            }
        }
    }
    let gens = vec![
        Permutation::from_images(right_x)?,
        Permutation::from_images(right_y)?,
    ];
    Group::from_generators(p * p * p, &gens, cap)
}

/// Smallest `m` with multiplicative order exactly `q` modulo `p`.
fn frobenius_multiplier(p: u64, q: u64) -> Option<u64> {
    (2..p).find(|&m| {
        let mut x = 1;
        for k in 1..=q {
            x = x * m % p;
            if x == 1 {
                return k == q;
            }
        }
        false
    })
}

fn parse_args<const N: usize>(spec: &str, args: &str) -> Result<[u32; N], CorpusError> {
    let invalid = |reason: String| CorpusError::InvalidSpec {
        spec: spec.to_string(),
        reason,
    };
    let values: Vec<u32> = args
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| invalid(format!("bad parameter: {e}")))?;
    values
        .try_into()
        .map_err(|v: Vec<u32>| invalid(format!("expected {N} parameter(s), got {}", v.len())))
}

impl FromStr for GroupSpec {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let invalid = |reason: &str| CorpusError::InvalidSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| invalid("expected `kind:params`"))?;
        let spec = match kind {
            "cyclic" | "dihedral" | "symmetric" | "alternating" | "heisenberg" => {
                let [n] = parse_args::<1>(s, rest)?;
                match kind {
                    _ if n == 0 => return Err(invalid("parameter must be positive")),
                    "cyclic" => GroupSpec::Cyclic(n),
                    "dihedral" if n < 3 => return Err(invalid("dihedral needs n >= 3")),
                    "dihedral" => GroupSpec::Dihedral(n),
                    "symmetric" => GroupSpec::Symmetric(n),
                    "alternating" => GroupSpec::Alternating(n),
                    _ if n == 2 || !is_prime(n as u64) => {
                        return Err(invalid("heisenberg needs an odd prime"))
                    }
                    _ => GroupSpec::Heisenberg(n),
                }
            }
            "frobenius" => {
                let [p, q] = parse_args::<2>(s, rest)?;
                if !is_prime(p as u64) {
                    return Err(invalid("frobenius needs a prime p"));
                }
                if q < 2 || (p - 1) % q != 0 {
                    return Err(invalid("frobenius needs q >= 2 dividing p - 1"));
                }
                GroupSpec::Frobenius(p, q)
            }
            "direct" => {
                let factors = rest
                    .split('+')
                    .map(str::parse)
                    .collect::<Result<Vec<GroupSpec>, _>>()?;
                GroupSpec::direct(factors)
            }
            "file" if !rest.is_empty() => GroupSpec::File(PathBuf::from(rest)),
            "file" => return Err(invalid("missing path")),
            _ => return Err(invalid("unknown group kind")),
        };
        Ok(spec)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alternating:{n}"),
            GroupSpec::Heisenberg(p) => write!(f, "heisenberg:{p}"),
            GroupSpec::Frobenius(p, q) => write!(f, "frobenius:{p},{q}"),
            GroupSpec::Direct(factors) => {
                write!(f, "direct:")?;
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
            GroupSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The fixed list of groups every scan covers.
///
/// Products with a Heisenberg factor are kept only when their class-size set
/// admits a hypothesis factorization; products with a cyclic factor are
/// kept when the orders are coprime.
pub fn builtin_corpus() -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut specs: Vec<GroupSpec> = (1..=40).map(Cyclic).collect();
    specs.extend((3..=20).map(Dihedral));
    specs.extend((3..=5).map(Symmetric));
    specs.extend([Alternating(4), Alternating(5), Heisenberg(3), Heisenberg(7)]);
    specs.extend([
        Frobenius(5, 4),
        Frobenius(7, 3),
        Frobenius(7, 6),
        Frobenius(13, 3),
    ]);

    let class_sizes = |spec: &GroupSpec| {
        class_size_set(
            &spec
                .build(crate::perm::DEFAULT_ELEMENT_CAP)
                .expect("builtin spec builds"),
        )
    };
    for left in [Frobenius(5, 4), Frobenius(7, 3), Alternating(5)] {
        let left_sizes = class_sizes(&left);
        for p in [3, 7] {
            let right = Heisenberg(p);
            let product = arith::set_product(&left_sizes.sizes, &class_sizes(&right).sizes)
                .expect("non-empty sets");
            let meets = !arith::find_hypothesis_factorizations(&product.set)
                .expect("contains 1")
                .is_empty();
            if meets {
                specs.push(GroupSpec::direct([left.clone(), right]));
            }
        }
        let order: u64 = left_sizes
            .multiplicities
            .iter()
            .map(|(&size, &count)| size * count as u64)
            .sum();
        for q in [2, 3, 5, 7] {
            if gcd(q as u64, order) == 1 {
                specs.push(GroupSpec::direct([left.clone(), Cyclic(q)]));
            }
        }
    }
    specs
}

/// One line of scan output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub spec: GroupSpec,
    pub report: Option<TheoremReport>,
    /// Set instead of `report` when the group could not be built or verified.
    pub error: Option<String>,
    pub engine_version: String,
    /// Seconds since the Unix epoch; absent in reproducible scans.
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub cap: usize,
    pub verify: VerifyConfig,
    /// Keep phase timings and a timestamp; off for byte-reproducible output.
    pub timings: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            cap: crate::perm::DEFAULT_ELEMENT_CAP,
            verify: VerifyConfig {
                lemmas: Some(LemmaConfig::default()),
                ..VerifyConfig::default()
            },
            timings: false,
        }
    }
}

pub fn scan_one(spec: &GroupSpec, config: &ScanConfig) -> ScanRecord {
    let outcome = spec
        .build(config.cap)
        .map_err(|e| e.to_string())
        .and_then(|g| {
            verify_main_theorem(&g, &spec.to_string(), &config.verify).map_err(|e| e.to_string())
        });
    let (mut report, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e)),
    };
    let timestamp = if config.timings {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    } else {
        if let Some(r) = report.as_mut() {
            r.timings.clear();
        }
        None
    };
    ScanRecord {
        spec: spec.clone(),
        report,
        error,
        engine_version: ENGINE_VERSION.to_string(),
        timestamp,
    }
}

/// Verifies every spec on a pool of `jobs` threads. Records come back sorted
/// by spec name whatever the job count.
pub fn scan(specs: &[GroupSpec], config: &ScanConfig, jobs: usize) -> Vec<ScanRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<ScanRecord> =
        pool.install(|| specs.par_iter().map(|s| scan_one(s, config)).collect());
    records.sort_by_cached_key(|r| r.spec.to_string());
    records
}

fn record_line(record: &ScanRecord) -> String {
    let mut line = serde_json::to_string(record).expect("records serialize");
    line.push('\n');
    line
}

/// Writes `records` as JSONL, replacing any existing file.
pub fn write_records(path: &Path, records: &[ScanRecord]) -> Result<(), CorpusError> {
    let text: String = records.iter().map(record_line).collect();
    fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Appends one record as a single write of one line.
pub fn append_record(path: &Path, record: &ScanRecord) -> Result<(), CorpusError> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_error(path, e))?;
    file.write_all(record_line(record).as_bytes())
        .map_err(|e| io_error(path, e))
}

/// Reads JSONL records; blank lines are skipped and line numbers start at 1.
pub fn read_records(path: &Path) -> Result<Vec<ScanRecord>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| CorpusError::Record {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_ELEMENT_CAP;
    use crate::theorem::Verdict;

    fn sizes(spec: &str) -> Vec<u64> {
        let g = spec
            .parse::<GroupSpec>()
            .unwrap()
            .build(DEFAULT_ELEMENT_CAP)
            .unwrap();
        class_size_set(&g).sizes.to_vec()
    }

    fn order(spec: &str) -> usize {
        spec.parse::<GroupSpec>()
            .unwrap()
            .build(DEFAULT_ELEMENT_CAP)
            .unwrap()
            .order()
    }

    #[test]
    fn spec_strings_round_trip() {
        for text in [
            "cyclic:6",
            "dihedral:5",
            "symmetric:4",
            "alternating:5",
            "heisenberg:3",
            "frobenius:5,4",
            "direct:frobenius:5,4+heisenberg:3",
            "file:groups/m11.grp",
        ] {
            assert_eq!(text.parse::<GroupSpec>().unwrap().to_string(), text);
        }
        let nested: GroupSpec = "direct:cyclic:2+direct:cyclic:3+cyclic:5".parse().unwrap();
        assert_eq!(nested.to_string(), "direct:cyclic:2+cyclic:3+cyclic:5");
        let json = serde_json::to_string(&GroupSpec::Frobenius(7, 3)).unwrap();
        assert_eq!(json, "\"frobenius:7,3\"");
        assert_eq!(
            serde_json::from_str::<GroupSpec>(&json).unwrap(),
            GroupSpec::Frobenius(7, 3)
        );
    }

    #[test]
    fn rejects_invalid_specs() {
        for text in [
            "cyclic:0",
            "cyclic",
            "cyclic:x",
            "dihedral:2",
            "heisenberg:2",
            "heisenberg:9",
            "frobenius:5,3",
            "frobenius:6,5",
            "frobenius:5",
            "quaternion:8",
            "direct:cyclic:2+bogus:1",
            "file:",
        ] {
            assert!(
                matches!(
                    text.parse::<GroupSpec>(),
                    Err(CorpusError::InvalidSpec { .. })
                ),
                "{text}"
            );
        }
    }

    #[test]
    fn constructed_orders_and_class_sizes() {
        assert_eq!(order("cyclic:1"), 1);
        assert_eq!(order("cyclic:12"), 12);
        assert_eq!(order("dihedral:7"), 14);
        assert_eq!(order("symmetric:5"), 120);
        assert_eq!(order("alternating:4"), 12);
        assert_eq!(order("heisenberg:7"), 343);
        assert_eq!(order("frobenius:13,3"), 39);
        assert_eq!(order("direct:symmetric:3+cyclic:5+cyclic:2"), 60);
        assert_eq!(sizes("frobenius:5,4"), vec![1, 4, 5]);
        assert_eq!(sizes("frobenius:7,3"), vec![1, 3, 7]);
        assert_eq!(sizes("frobenius:7,6"), vec![1, 6, 7]);
        assert_eq!(sizes("heisenberg:3"), vec![1, 3]);
        assert_eq!(sizes("dihedral:4"), vec![1, 2]);
    }

    #[test]
    fn heisenberg_has_exponent_p() {
        let g = GroupSpec::Heisenberg(5).build(DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(g.order(), 125);
        assert!(!g.is_abelian());
        assert!(g.elements().skip(1).all(|x| g.element_order(x) == 5));
        assert_eq!(g.center().order(), 5);
    }

    #[test]
    fn frobenius_multiplier_is_smallest_of_exact_order() {
        assert_eq!(frobenius_multiplier(5, 4), Some(2));
        assert_eq!(frobenius_multiplier(7, 3), Some(2));
        assert_eq!(frobenius_multiplier(7, 6), Some(3));
        assert_eq!(frobenius_multiplier(13, 3), Some(3));
        assert_eq!(frobenius_multiplier(7, 2), Some(6));
    }

    #[test]
    fn build_is_deterministic() {
        let spec: GroupSpec = "direct:frobenius:7,3+cyclic:5".parse().unwrap();
        let a = spec.build(DEFAULT_ELEMENT_CAP).unwrap();
        let b = spec.build(DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(a.generators(), b.generators());
        assert_eq!(a, b);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            GroupSpec::Symmetric(6).build(100),
            Err(CorpusError::Group(GroupError::CapExceeded { .. }))
        ));
    }

    #[test]
    fn builtin_corpus_contents() {
        let corpus = builtin_corpus();
        let names: Vec<String> = corpus.iter().map(ToString::to_string).collect();
        for expected in [
            "direct:frobenius:5,4+heisenberg:3",
            "direct:frobenius:5,4+heisenberg:7",
            "direct:alternating:5+heisenberg:7",
            "direct:alternating:5+cyclic:7",
            "direct:frobenius:7,3+cyclic:5",
        ] {
            assert!(names.iter().any(|n| n == expected), "{expected}");
        }
        for absent in [
            "direct:alternating:5+heisenberg:3",
            "direct:frobenius:7,3+heisenberg:3",
            "direct:alternating:5+cyclic:3",
        ] {
            assert!(!names.iter().any(|n| n == absent), "{absent}");
        }
        assert_eq!(corpus, builtin_corpus());
    }

    fn sample_records() -> Vec<ScanRecord> {
        let config = ScanConfig::default();
        [
            "cyclic:4",
            "symmetric:3",
            "direct:frobenius:5,4+heisenberg:3",
        ]
        .iter()
        .map(|s| scan_one(&s.parse().unwrap(), &config))
        .collect()
    }

    #[test]
    fn records_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.jsonl");
        let records = sample_records();
        write_records(&path, &records).unwrap();
        assert_eq!(read_records(&path).unwrap(), records);

        let appended = dir.path().join("appended.jsonl");
        for r in &records {
            append_record(&appended, r).unwrap();
        }
        assert_eq!(fs::read(&appended).unwrap(), fs::read(&path).unwrap());
    }

    #[test]
    fn empty_and_truncated_files() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.jsonl");
        fs::write(&empty, "").unwrap();
        assert!(read_records(&empty).unwrap().is_empty());

        let broken = dir.path().join("broken.jsonl");
        let line = record_line(&sample_records()[0]);
        fs::write(&broken, format!("{line}{}", &line[..line.len() / 2])).unwrap();
        assert!(matches!(
            read_records(&broken),
            Err(CorpusError::Record { line: 2, .. })
        ));
        assert!(matches!(
            read_records(&dir.path().join("missing.jsonl")),
            Err(CorpusError::Io { .. })
        ));
    }

    #[test]
    fn scan_sorts_and_records_failures() {
        let specs: Vec<GroupSpec> = ["symmetric:3", "cyclic:2", "file:/nonexistent.grp"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let records = scan(&specs, &ScanConfig::default(), 2);
        let names: Vec<String> = records.iter().map(|r| r.spec.to_string()).collect();
        assert_eq!(names, ["cyclic:2", "file:/nonexistent.grp", "symmetric:3"]);
        assert!(records[1].error.is_some() && records[1].report.is_none());
        assert_eq!(
            records[2].report.as_ref().unwrap().verdict,
            Verdict::HypothesisNotMet
        );
        assert!(records.iter().all(|r| r.timestamp.is_none()));
    }
}
