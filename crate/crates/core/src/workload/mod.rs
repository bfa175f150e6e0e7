//! Operation scripts, their text format, and generators.
//!
//! A script is one op per line:
//!
//! ```text
//! makeheap <h>
//! insert <h> <item> <key>
//! decrease <h> <item> <key>
//! delete <h> <item>
//! deletemin <h>
//! meld <h1> <h2> <h>
//! findmin <h>
//! ```
//!
//! `#` starts a comment. Heap names and item ids are arbitrary tokens, keys
//! are `i64`. Tokens are interned on parse, so ops refer to heaps and items
//! by index.

pub mod adversary;
pub mod random;

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::common::ItemId;
use crate::strategy::LinkOrder;
use crate::variants::VariantConfig;

pub use adversary::{gen_binomial, gen_eager_small_adversary, gen_naive_adversary, gen_rl_adversary, gen_tl_adversary};
pub use random::{gen_random, Mix};

use crate::policy::{Regime, SmallFn};

pub type HeapId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    MakeHeap { heap: HeapId },
    Insert { heap: HeapId, item: ItemId, key: i64 },
    Decrease { heap: HeapId, item: ItemId, key: i64 },
    Delete { heap: HeapId, item: ItemId },
    DeleteMin { heap: HeapId },
    Meld { a: HeapId, b: HeapId, into: HeapId },
    FindMin { heap: HeapId },
}

impl Op {
    pub fn kind(&self) -> OpKind {
        match self {
            Op::MakeHeap { .. } => OpKind::MakeHeap,
            Op::Insert { .. } => OpKind::Insert,
            Op::Decrease { .. } => OpKind::Decrease,
            Op::Delete { .. } => OpKind::Delete,
            Op::DeleteMin { .. } => OpKind::DeleteMin,
            Op::Meld { .. } => OpKind::Meld,
            Op::FindMin { .. } => OpKind::FindMin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    MakeHeap,
    Insert,
    Decrease,
    Delete,
    DeleteMin,
    Meld,
    FindMin,
}

impl OpKind {
    pub const ALL: [OpKind; 7] = [
        OpKind::MakeHeap,
        OpKind::Insert,
        OpKind::Decrease,
        OpKind::Delete,
        OpKind::DeleteMin,
        OpKind::Meld,
        OpKind::FindMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::MakeHeap => "makeheap",
            OpKind::Insert => "insert",
            OpKind::Decrease => "decrease",
            OpKind::Delete => "delete",
            OpKind::DeleteMin => "deletemin",
            OpKind::Meld => "meld",
            OpKind::FindMin => "findmin",
        }
    }
}

/// A contiguous run of ops, `[start, end)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// Generator metadata, written as a JSON sidecar.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub params: BTreeMap<String, String>,
    /// The variant the construction is aimed at.
    pub target: Option<VariantConfig>,
    /// Link order the construction assumes on its target.
    pub link_order: LinkOrder,
    /// Ops before the repeated part.
    pub prologue: Span,
    pub rounds: Vec<Span>,
    pub predicted: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Workload {
    pub heaps: Vec<String>,
    pub items: Vec<String>,
    pub ops: Vec<Op>,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl Workload {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn heap_name(&self, h: HeapId) -> &str {
        &self.heaps[h as usize]
    }

    pub fn item_name(&self, it: ItemId) -> &str {
        &self.items[it.0 as usize]
    }

    pub fn count(&self, kind: OpKind) -> usize {
        self.ops.iter().filter(|o| o.kind() == kind).count()
    }

    pub fn parse(text: &str) -> Result<Workload, ParseError> {
        let mut b = Builder::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tok: Vec<&str> = body.split_whitespace().collect();
            if tok.is_empty() {
                continue;
            }
            let err = |msg: String| ParseError { line, msg };
            let arity = |n: usize| {
                if tok.len() == n + 1 {
                    Ok(())
                } else {
                    Err(err(format!("`{}` takes {n} arguments, got {}", tok[0], tok.len() - 1)))
                }
            };
            let key = |s: &str| s.parse::<i64>().map_err(|_| err(format!("bad key `{s}`")));
            let op = match tok[0] {
                "makeheap" => {
                    arity(1)?;
                    Op::MakeHeap { heap: b.heap(tok[1]) }
                }
                "insert" => {
                    arity(3)?;
                    Op::Insert { heap: b.heap(tok[1]), item: b.item(tok[2]), key: key(tok[3])? }
                }
                "decrease" => {
                    arity(3)?;
                    Op::Decrease { heap: b.heap(tok[1]), item: b.item(tok[2]), key: key(tok[3])? }
                }
                "delete" => {
                    arity(2)?;
                    Op::Delete { heap: b.heap(tok[1]), item: b.item(tok[2]) }
                }
                "deletemin" => {
                    arity(1)?;
                    Op::DeleteMin { heap: b.heap(tok[1]) }
                }
                "meld" => {
                    arity(3)?;
                    Op::Meld { a: b.heap(tok[1]), b: b.heap(tok[2]), into: b.heap(tok[3]) }
                }
                "findmin" => {
                    arity(1)?;
                    Op::FindMin { heap: b.heap(tok[1]) }
                }
                other => return Err(err(format!("unknown op `{other}`"))),
            };
            b.w.ops.push(op);
        }
        Ok(b.w)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.ops.len() * 16);
        if !self.meta.generator.is_empty() {
            let _ = write!(s, "# {}", self.meta.generator);
            for (k, v) in &self.meta.params {
                let _ = write!(s, " {k}={v}");
            }
            s.push('\n');
        }
        for op in &self.ops {
            let h = |x: HeapId| self.heap_name(x);
            let _ = match *op {
                Op::MakeHeap { heap } => writeln!(s, "makeheap {}", h(heap)),
                Op::Insert { heap, item, key } => writeln!(s, "insert {} {} {key}", h(heap), self.item_name(item)),
                Op::Decrease { heap, item, key } => writeln!(s, "decrease {} {} {key}", h(heap), self.item_name(item)),
                Op::Delete { heap, item } => writeln!(s, "delete {} {}", h(heap), self.item_name(item)),
                Op::DeleteMin { heap } => writeln!(s, "deletemin {}", h(heap)),
                Op::Meld { a, b, into } => writeln!(s, "meld {} {} {}", h(a), h(b), h(into)),
                Op::FindMin { heap } => writeln!(s, "findmin {}", h(heap)),
            };
        }
        s
    }

    pub fn meta_json(&self) -> String {
        serde_json::to_string_pretty(&self.meta).expect("meta serializes")
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Interns heap names and item tokens while a script is assembled.
#[derive(Debug, Default)]
pub struct Builder {
    w: Workload,
    heap_ids: HashMap<String, HeapId>,
    item_ids: HashMap<String, ItemId>,
}

impl Builder {
    pub fn heap(&mut self, name: &str) -> HeapId {
        if let Some(&h) = self.heap_ids.get(name) {
            return h;
        }
        let h = self.w.heaps.len() as HeapId;
        self.w.heaps.push(name.to_string());
        self.heap_ids.insert(name.to_string(), h);
        h
    }

    pub fn item(&mut self, token: &str) -> ItemId {
        if let Some(&it) = self.item_ids.get(token) {
            return it;
        }
        let it = ItemId(self.w.items.len() as u32);
        self.w.items.push(token.to_string());
        self.item_ids.insert(token.to_string(), it);
        it
    }

    /// A new item whose token is its index.
    pub fn fresh_item(&mut self) -> ItemId {
        let it = ItemId(self.w.items.len() as u32);
        let token = it.0.to_string();
        self.w.items.push(token.clone());
        self.item_ids.insert(token, it);
        it
    }

    pub fn push(&mut self, op: Op) {
        self.w.ops.push(op);
    }

    pub fn len(&self) -> usize {
        self.w.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.ops.is_empty()
    }

    pub fn meta_mut(&mut self) -> &mut Meta {
        &mut self.w.meta
    }

    pub fn finish(self) -> Workload {
        self.w
    }
}

/// Largest `l` accepted by the generators whose scripts grow like `2^l`.
pub const MAX_EXPONENTIAL_L: u32 = 16;
/// Largest `l` accepted by the polynomial-size ladder construction.
pub const MAX_LADDER_L: u32 = 256;

/// Generator names accepted by [`generate`].
pub const GENERATORS: [&str; 6] = ["binomial", "eager", "naive", "tl", "rl", "random"];

/// Builds a script from a generator name and `key=value` parameters.
/// `seed` is used by `random` when no `seed` parameter is given.
pub fn generate(name: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Workload, String> {
    let allowed: &[&str] = match name {
        "binomial" => &["l"],
        "eager" | "rl" => &["l", "rounds", "f"],
        "naive" => &["l", "rounds", "k"],
        "tl" => &["j", "l", "reps"],
        "random" => &["m", "seed", "mix"],
        _ => return Err(format!("unknown generator `{name}`, expected one of {}", GENERATORS.join(", "))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("generator `{name}` takes {}, not `{k}`", allowed.join(", ")));
    }
    fn num<T: std::str::FromStr>(p: &BTreeMap<String, String>, k: &str, default: Option<T>) -> Result<T, String> {
        match p.get(k) {
            Some(v) => v.parse().map_err(|_| format!("bad value `{v}` for `{k}`")),
            None => default.ok_or_else(|| format!("missing parameter `{k}`")),
        }
    }
    let small = |p: &BTreeMap<String, String>| -> Result<SmallFn, String> {
        let f = p.get("f").map_or("r", String::as_str);
        match format!("small-{f}").parse::<Regime>() {
            Ok(Regime::Small(f)) => Ok(f),
            _ => Err(format!("bad value `{f}` for `f`, expected r, sqrt or log")),
        }
    };
    let bounded = |l: u32, cap: u32| {
        if l > cap {
            Err(format!("l = {l} exceeds the cap of {cap}"))
        } else {
            Ok(l)
        }
    };
    Ok(match name {
        "binomial" => gen_binomial(bounded(num(params, "l", None)?, MAX_EXPONENTIAL_L)?),
        "eager" => gen_eager_small_adversary(
            bounded(num(params, "l", None)?, MAX_EXPONENTIAL_L)?,
            num(params, "rounds", Some(1))?,
            small(params)?,
        ),
        "naive" => {
            let k = params.get("k").map_or("small-r", String::as_str);
            let regime: Regime = k.parse().map_err(|e| format!("bad value `{k}` for `k`: {e}"))?;
            gen_naive_adversary(
                bounded(num(params, "l", None)?, MAX_EXPONENTIAL_L)?,
                num(params, "rounds", Some(1))?,
                regime,
            )
        }
        "tl" => {
            let j: u32 = num(params, "j", Some(0))?;
            if j > 1 {
                return Err(format!("`j` must be 0 or 1, got {j}"));
            }
            let reps =
                params.get("reps").map(|r| r.parse().map_err(|_| format!("bad value `{r}` for `reps`"))).transpose()?;
            gen_tl_adversary(j, bounded(num(params, "l", None)?, MAX_LADDER_L)?, reps)
        }
        "rl" => gen_rl_adversary(
            bounded(num(params, "l", None)?, MAX_EXPONENTIAL_L)?,
            num(params, "rounds", Some(1))?,
            small(params)?,
        ),
        "random" => {
            let mix = match params.get("mix") {
                Some(m) => m.parse()?,
                None => Mix::default(),
            };
            let m: usize = num(params, "m", None)?;
            if m == 0 {
                return Err("`m` must be at least 1".into());
            }
            gen_random(m, num(params, "seed", Some(seed))?, mix)
        }
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG: &str = "\
# a comment
makeheap h
insert h a 5   # trailing
insert h b 3
findmin h
decrease h a 1
deletemin h
delete h b
makeheap g
meld h g h
";

    #[test]
    fn parse_and_print_round_trip() {
        let w = Workload::parse(FIG).unwrap();
        assert_eq!(w.len(), 9);
        assert_eq!(w.heaps, vec!["h", "g"]);
        assert_eq!(w.items, vec!["a", "b"]);
        assert_eq!(w.ops[1], Op::Insert { heap: 0, item: ItemId(0), key: 5 });
        assert_eq!(w.ops[8], Op::Meld { a: 0, b: 1, into: 0 });
        let again = Workload::parse(&w.to_text()).unwrap();
        assert_eq!(again.ops, w.ops);
        assert_eq!(w.count(OpKind::Insert), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Workload::parse("makeheap h\ninsert h a\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = Workload::parse("makeheap h\n\n# x\nfrobnicate h\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.to_string().contains("frobnicate"));
        let e = Workload::parse("insert h a 1x").unwrap_err();
        assert_eq!((e.line, e.msg.as_str()), (1, "bad key `1x`"));
    }

    #[test]
    fn keys_cover_i64() {
        let w = Workload::parse(&format!("makeheap h\ninsert h x {}\n", i64::MIN)).unwrap();
        assert_eq!(w.ops[1], Op::Insert { heap: 0, item: ItemId(0), key: i64::MIN });
    }

    fn params(s: &[(&str, &str)]) -> BTreeMap<String, String> {
        s.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn generate_by_name() {
        let w = generate("binomial", &params(&[("l", "3")]), 0).unwrap();
        assert_eq!(w, gen_binomial(3));
        let w = generate("random", &params(&[("m", "50")]), 4).unwrap();
        assert_eq!(w, gen_random(50, 4, Mix::default()));
        let w = generate("rl", &params(&[("l", "4"), ("rounds", "2"), ("f", "log")]), 0).unwrap();
        assert_eq!(w, gen_rl_adversary(4, 2, SmallFn::Log2));
        assert!(generate("tl", &params(&[("l", "4"), ("j", "1")]), 0).is_ok());
        assert!(generate("naive", &params(&[("l", "4"), ("k", "large2")]), 0).is_ok());
    }

    #[test]
    fn generate_rejects_bad_parameters() {
        assert!(generate("binomial", &params(&[]), 0).unwrap_err().contains("missing"));
        assert!(generate("binomial", &params(&[("l", "17")]), 0).unwrap_err().contains("cap"));
        assert!(generate("binomial", &params(&[("l", "3"), ("x", "1")]), 0).unwrap_err().contains("`x`"));
        assert!(generate("eager", &params(&[("l", "3"), ("f", "cube")]), 0).is_err());
        assert!(generate("tl", &params(&[("l", "3"), ("j", "2")]), 0).is_err());
        assert!(generate("fancy", &params(&[]), 0).is_err());
    }
}
