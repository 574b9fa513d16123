//! Experiment configuration: a flat `key = value` document.
//!
//! ```text
//! # comments start with '#'
//! quantity  = dk                      # see Quantity
//! primes    = 10007, 20011
//! set       = random:303,1 | random:303,1
//! set       = subgroup:3*4            # `*N` repeats a descriptor N times
//! bounds    = dk:sharp, dk:collinear
//! k         = 3
//! variant   = full                    # full | star | tilde
//! weights   = unit                    # unit | random(SEED)
//! seed      = 0
//! budget    = 100000000
//! engine    = schoolbook              # schoolbook | ntt
//! threshold = theorem                 # theorem | energy
//! poly      = 1:3,1:5                 # sparse for mordell, dense for weyl-gap
//! chi       = 0
//! output    = results.csv
//! ```
//!
//! `set` and `poly` may repeat; each line is one row group. All other keys
//! appear at most once.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundId, CaseThreshold};
use crate::counting::{Engine, Variant};
use crate::error::{Error, Result};
use crate::field::{is_prime, MAX_MODULUS};
use crate::sets::{SetDescriptor, SparsePoly};
use crate::sums::{DensePoly, DEFAULT_SUM_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    MultilinearSum,
    Mordell,
    WeylGap,
    Dk,
    Energy,
    NCount,
    Incidences,
    FourierL1,
}

const QUANTITIES: [(&str, Quantity); 8] = [
    ("multilinear-sum", Quantity::MultilinearSum),
    ("mordell", Quantity::Mordell),
    ("weyl-gap", Quantity::WeylGap),
    ("dk", Quantity::Dk),
    ("energy", Quantity::Energy),
    ("n-count", Quantity::NCount),
    ("incidences", Quantity::Incidences),
    ("fourier-l1", Quantity::FourierL1),
];

impl Quantity {
    pub fn name(self) -> &'static str {
        QUANTITIES.iter().find(|q| q.1 == self).expect("listed").0
    }

    /// Whether `id` can be compared against this quantity.
    pub fn accepts(self, id: BoundId) -> bool {
        use BoundId::*;
        match self {
            Quantity::MultilinearSum => matches!(id, Vinogradov | Thm11 | Thm12 | Lemma21 | Lemma25 | Lemma26 | Lemma34),
            Quantity::Mordell => matches!(id, Weil | Thm13),
            Quantity::Dk => matches!(id, Dk(_)),
            Quantity::NCount => matches!(id, NCount | NCountSubgroup),
            Quantity::Incidences => matches!(id, Rudnev),
            Quantity::FourierL1 => matches!(id, GapL1),
            Quantity::WeylGap | Quantity::Energy => false,
        }
    }

    /// Number of sets a descriptor tuple must hold, when fixed.
    fn arity(self) -> Option<usize> {
        match self {
            Quantity::Energy | Quantity::FourierL1 | Quantity::WeylGap => Some(1),
            Quantity::NCount | Quantity::Incidences => Some(3),
            Quantity::Mordell => Some(0),
            Quantity::MultilinearSum | Quantity::Dk => None,
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        QUANTITIES
            .iter()
            .find(|q| q.0 == s)
            .map(|q| q.1)
            .ok_or_else(|| Error::Unknown {
                kind: "quantity",
                name: s.into(),
                known: QUANTITIES.iter().map(|q| q.0).collect::<Vec<_>>().join(", "),
            })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightSpec {
    #[default]
    Unit,
    Random(u64),
}

impl FromStr for WeightSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "unit" {
            return Ok(WeightSpec::Unit);
        }
        s.strip_prefix("random(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|seed| seed.trim().parse().ok())
            .map(WeightSpec::Random)
            .ok_or_else(|| Error::Config(format!("weights must be `unit` or `random(SEED)`, got `{s}`")))
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Unit => f.write_str("unit"),
            WeightSpec::Random(seed) => write!(f, "random({seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub quantity: Quantity,
    pub primes: Vec<u64>,
    pub set_tuples: Vec<Vec<SetDescriptor>>,
    pub polys: Vec<String>,
    pub bound_ids: Vec<BoundId>,
    pub k: u32,
    pub variant: Variant,
    pub weights: WeightSpec,
    pub seed: u64,
    pub budget: u128,
    pub engine: Engine,
    pub threshold: CaseThreshold,
    pub chi: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// A config with defaults for everything except the quantity and primes.
    pub fn new(quantity: Quantity, primes: Vec<u64>) -> Self {
        ExperimentConfig {
            quantity,
            primes,
            set_tuples: Vec::new(),
            polys: Vec::new(),
            bound_ids: Vec::new(),
            k: 2,
            variant: Variant::Full,
            weights: WeightSpec::Unit,
            seed: 0,
            budget: DEFAULT_SUM_BUDGET,
            engine: Engine::Schoolbook,
            threshold: CaseThreshold::Theorem,
            chi: 0,
            output: None,
        }
    }

    /// Checks primes, descriptor arity and quantity/bound compatibility.
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::Config("no primes given".into()));
        }
        for &p in &self.primes {
            if p < 3 || !is_prime(p) || p > MAX_MODULUS {
                return Err(Error::Config(format!("{p} is not an odd prime up to {MAX_MODULUS}")));
            }
        }
        for &id in &self.bound_ids {
            if !self.quantity.accepts(id) {
                return Err(Error::Config(format!("bound `{id}` is not compatible with quantity `{}`", self.quantity)));
            }
        }
        if self.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        match self.quantity {
            Quantity::Mordell => {
                if self.polys.is_empty() {
                    return Err(Error::Config("mordell needs at least one `poly`".into()));
                }
                for poly in &self.polys {
                    poly.parse::<SparsePoly>().map_err(|e| Error::Config(e.to_string()))?;
                }
            }
            Quantity::WeylGap => {
                if self.polys.len() != 1 {
                    return Err(Error::Config("weyl-gap needs exactly one dense `poly`".into()));
                }
                let poly: DensePoly = self.polys[0].parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                if poly.degree() < 1 {
                    return Err(Error::Config("weyl-gap needs a polynomial of degree at least 1".into()));
                }
            }
            _ if !self.polys.is_empty() => {
                return Err(Error::Config(format!("`poly` is not used by quantity `{}`", self.quantity)));
            }
            _ => {}
        }
        if self.quantity != Quantity::Mordell && self.set_tuples.is_empty() {
            return Err(Error::Config("no `set` lines given".into()));
        }
        for tuple in &self.set_tuples {
            let len = tuple.len();
            let ok = match self.quantity.arity() {
                Some(n) => len == n,
                None if self.quantity == Quantity::Dk => {
                    len == 1 || len == self.k as usize || tuple.windows(2).all(|w| w[0] == w[1])
                }
                None => len >= 1,
            };
            if !ok {
                return Err(Error::Config(format!(
                    "quantity `{}` cannot take {len} sets in one `set` line",
                    self.quantity
                )));
            }
            if self.quantity == Quantity::WeylGap && !matches!(tuple[0], SetDescriptor::Gap(_)) {
                return Err(Error::Config("weyl-gap needs a `gap:` descriptor".into()));
            }
        }
        if self.quantity == Quantity::Dk
            && self.variant != Variant::Full
            && !self.bound_ids.is_empty()
        {
            return Err(Error::Config("D_k bounds are stated for the full variant".into()));
        }
        Ok(())
    }
}

fn parse_tuple(line: &str) -> Result<Vec<SetDescriptor>> {
    let mut tuple = Vec::new();
    for part in line.split('|') {
        let part = part.trim();
        let (desc, copies) = match part.rsplit_once('*') {
            Some((d, n)) => (
                d.trim(),
                n.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad repetition count in `{part}`")))?,
            ),
            None => (part, 1),
        };
        let parsed: SetDescriptor = desc.parse()?;
        tuple.extend(std::iter::repeat_n(parsed, copies));
    }
    Ok(tuple)
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{key}` value `{value}`")))
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::new(Quantity::Dk, Vec::new());
        let mut seen: Vec<String> = Vec::new();
        let mut quantity_set = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "set" && key != "poly" {
                if seen.iter().any(|k| k == key) {
                    return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
                }
                seen.push(key.to_string());
            }
            match key {
                "quantity" => {
                    config.quantity = value.parse()?;
                    quantity_set = true;
                }
                "primes" => {
                    config.primes = value
                        .split(',')
                        .map(|s| parse_scalar("primes", s.trim()))
                        .collect::<Result<_>>()?;
                }
                "set" => config.set_tuples.push(parse_tuple(value)?),
                "poly" => config.polys.push(value.to_string()),
                "bounds" => {
                    config.bound_ids = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?;
                }
                "k" => config.k = parse_scalar(key, value)?,
                "variant" => config.variant = value.parse()?,
                "weights" => config.weights = value.parse()?,
                "seed" => config.seed = parse_scalar(key, value)?,
                "budget" => config.budget = parse_scalar(key, value)?,
                "engine" => {
                    config.engine = match value {
                        "schoolbook" => Engine::Schoolbook,
                        "ntt" => Engine::Ntt,
                        _ => return Err(Error::Config(format!("engine must be `schoolbook` or `ntt`, got `{value}`"))),
                    }
                }
                "threshold" => {
                    config.threshold = match value {
                        "theorem" => CaseThreshold::Theorem,
                        "energy" => CaseThreshold::Energy,
                        _ => return Err(Error::Config(format!("threshold must be `theorem` or `energy`, got `{value}`"))),
                    }
                }
                "chi" => config.chi = parse_scalar(key, value)?,
                "output" => config.output = Some(PathBuf::from(value)),
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        if !quantity_set {
            return Err(Error::Config("missing `quantity`".into()));
        }
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::DkRegime;

    #[test]
    fn parses_full_document() {
        let text = "
            # D_3 sweep
            quantity = dk
            primes = 7, 11
            set = subgroup:3*4
            set = random:4,1 | random:4,2
            bounds = dk:sharp, dk:collinear
            k = 2
            seed = 5
        ";
        let c: ExperimentConfig = text.parse().unwrap();
        assert_eq!(c.primes, vec![7, 11]);
        assert_eq!(c.set_tuples[0].len(), 4);
        assert_eq!(c.set_tuples[1].len(), 2);
        assert_eq!(c.bound_ids, vec![BoundId::Dk(DkRegime::Sharp), BoundId::Dk(DkRegime::Collinear)]);
        assert_eq!(c.seed, 5);
    }

    #[test]
    fn rejects_bad_documents() {
        let base = "quantity = dk\nset = interval:1..3\n";
        for (extra, needle) in [
            ("primes = 9\n", "not an odd prime"),
            ("primes = 7\nbounds = weil\n", "not compatible"),
            ("primes = 7\nk = 2\nk = 3\n", "duplicate"),
            ("primes = 7\ncolour = red\n", "unknown key"),
            ("primes = 7\nvariant = star\nbounds = dk:sharp\n", "full variant"),
        ] {
            let err = format!("{base}{extra}").parse::<ExperimentConfig>().unwrap_err();
            assert!(err.to_string().contains(needle), "{err}");
        }
        assert!("primes = 7\nset = interval:1..3".parse::<ExperimentConfig>().is_err());
        assert!("quantity = n-count\nprimes = 7\nset = interval:1..3\n".parse::<ExperimentConfig>().is_err());
        assert!("quantity = dk\nprimes = 7\nset = interval:1..3*x\n".parse::<ExperimentConfig>().is_err());
    }

    #[test]
    fn weights_literal() {
        assert_eq!("random(42)".parse::<WeightSpec>().unwrap(), WeightSpec::Random(42));
        assert_eq!(WeightSpec::Random(42).to_string(), "random(42)");
        assert!("random".parse::<WeightSpec>().is_err());
    }
}
