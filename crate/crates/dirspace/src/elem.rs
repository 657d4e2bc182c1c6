//! Canonical element values and monotone sequence descriptors.
//!
//! Every carrier in the crate uses [`Elem`] as its element type. Equality is
//! structural and the JSON form is total, so reports and counterexamples
//! replay byte-for-byte.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::fmt;

use crate::order::MapRule;

/// Largest dyadic exponent produced by [`Seq::Below`].
pub const DYADIC_MAX_EXP: u32 = 56;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Elem {
    /// Natural number or index into a finite carrier.
    N(u64),
    /// Adjoined top; the level counts nested `adjoin_top` below it.
    Top(u8),
    /// Adjoined bottom from `lift`; level as for `Top`.
    Bot(u8),
    L(Box<Elem>),
    R(Box<Elem>),
    P(Box<Elem>, Box<Elem>),
    /// Dyadic rational `num / 2^exp`, normalized.
    Dy(u64, u32),
    /// Finite set, sorted and deduplicated.
    Set(Vec<Elem>),
    /// Table of a map on a finite domain, listed in domain order.
    Map(Vec<Elem>),
    /// Principal ideal.
    Down(Box<Elem>),
    /// Ideal generated by a monotone sequence.
    Lim(Box<Seq>),
}

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::P(Box::new(a), Box::new(b))
    }

    pub fn left(a: Elem) -> Elem {
        Elem::L(Box::new(a))
    }

    pub fn right(a: Elem) -> Elem {
        Elem::R(Box::new(a))
    }

    pub fn down(a: Elem) -> Elem {
        Elem::Down(Box::new(a))
    }

    pub fn lim(s: Seq) -> Elem {
        Elem::Lim(Box::new(s))
    }

    pub fn set(mut v: Vec<Elem>) -> Elem {
        v.sort();
        v.dedup();
        Elem::Set(v)
    }

    pub fn dyadic(num: u64, exp: u32) -> Elem {
        let (mut n, mut e) = (num, exp);
        if n == 0 {
            return Elem::Dy(0, 0);
        }
        while e > 0 && n % 2 == 0 {
            n /= 2;
            e -= 1;
        }
        Elem::Dy(n, e)
    }

    pub fn top() -> Elem {
        Elem::Top(0)
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Elem::N(n) => Some(*n),
            _ => None,
        }
    }

    pub fn fst(&self) -> Option<&Elem> {
        match self {
            Elem::P(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn snd(&self) -> Option<&Elem> {
        match self {
            Elem::P(_, b) => Some(b),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Elem::N(n) => json!(n),
            Elem::Top(0) => json!("top"),
            Elem::Top(k) => json!(format!("top{k}")),
            Elem::Bot(0) => json!("bot"),
            Elem::Bot(k) => json!(format!("bot{k}")),
            Elem::L(a) => json!({ "l": a.to_json() }),
            Elem::R(a) => json!({ "r": a.to_json() }),
            Elem::P(a, b) => json!([a.to_json(), b.to_json()]),
            Elem::Dy(n, e) => json!({ "dy": [n, e] }),
            Elem::Set(v) => json!({ "set": v.iter().map(Elem::to_json).collect::<Vec<_>>() }),
            Elem::Map(v) => json!({ "map": v.iter().map(Elem::to_json).collect::<Vec<_>>() }),
            Elem::Down(a) => json!({ "down": a.to_json() }),
            Elem::Lim(s) => json!({ "lim": serde_json::to_value(s.as_ref()).unwrap_or(Value::Null) }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Elem, String> {
        match v {
            Value::Number(n) => n
                .as_u64()
                .map(Elem::N)
                .ok_or_else(|| format!("element {n} is not a natural number")),
            Value::String(s) => parse_level(s, "top")
                .map(Elem::Top)
                .or_else(|| parse_level(s, "bot").map(Elem::Bot))
                .ok_or_else(|| format!("unknown element tag {s:?}")),
            Value::Array(a) if a.len() == 2 => {
                Ok(Elem::pair(Elem::from_json(&a[0])?, Elem::from_json(&a[1])?))
            }
            Value::Object(m) if m.len() == 1 => {
                let (k, x) = m.iter().next().expect("one entry");
                match k.as_str() {
                    "l" => Ok(Elem::left(Elem::from_json(x)?)),
                    "r" => Ok(Elem::right(Elem::from_json(x)?)),
                    "down" => Ok(Elem::down(Elem::from_json(x)?)),
                    "dy" => {
                        let p: (u64, u32) =
                            serde_json::from_value(x.clone()).map_err(|e| format!("dy: {e}"))?;
                        Ok(Elem::dyadic(p.0, p.1))
                    }
                    "set" | "map" => {
                        let items = x
                            .as_array()
                            .ok_or_else(|| format!("{k}: expected an array"))?
                            .iter()
                            .map(Elem::from_json)
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(if k == "set" { Elem::set(items) } else { Elem::Map(items) })
                    }
                    "lim" => {
                        let s: Seq = serde_json::from_value(x.clone()).map_err(|e| format!("lim: {e}"))?;
                        Ok(Elem::lim(s))
                    }
                    other => Err(format!("unknown element tag {other:?}")),
                }
            }
            other => Err(format!("cannot read element from {other}")),
        }
    }
}

fn parse_level(s: &str, tag: &str) -> Option<u8> {
    let rest = s.strip_prefix(tag)?;
    if rest.is_empty() {
        Some(0)
    } else {
        rest.parse().ok()
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::N(n) => write!(f, "{n}"),
            Elem::Top(0) => write!(f, "⊤"),
            Elem::Top(k) => write!(f, "⊤{k}"),
            Elem::Bot(0) => write!(f, "⊥"),
            Elem::Bot(k) => write!(f, "⊥{k}"),
            Elem::L(a) => write!(f, "inl({a})"),
            Elem::R(a) => write!(f, "inr({a})"),
            Elem::P(a, b) => write!(f, "({a},{b})"),
            Elem::Dy(n, e) => write!(f, "{n}/2^{e}"),
            Elem::Set(v) | Elem::Map(v) => {
                let open = if matches!(self, Elem::Set(_)) { "{" } else { "<" };
                let close = if matches!(self, Elem::Set(_)) { "}" } else { ">" };
                write!(f, "{open}")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "{close}")
            }
            Elem::Down(a) => write!(f, "↓{a}"),
            Elem::Lim(s) => write!(f, "↓[{s}]"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Elem::from_json(&v).map_err(D::Error::custom)
    }
}

/// A monotone sequence `n ↦ s(n)`, described structurally so that it can be
/// serialized inside counterexamples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seq {
    Const(Elem),
    /// `n ↦ from + n`.
    Nat { from: u64 },
    /// Dyadics approaching `num/2^exp` from below.
    Below { num: u64, exp: u32 },
    Inl(Box<Seq>),
    Inr(Box<Seq>),
    Pair(Box<Seq>, Box<Seq>),
    /// `n ↦ ↓s(n)`.
    Down(Box<Seq>),
    /// `n ↦ {s(n)}`.
    Single(Box<Seq>),
    /// `n ↦ s(n) ∪ t(n)` for set-valued sequences.
    Union(Box<Seq>, Box<Seq>),
    /// `n ↦ rule(s(n))`.
    Apply(MapRule, Box<Seq>),
}

impl Seq {
    pub fn nat() -> Seq {
        Seq::Nat { from: 0 }
    }

    pub fn pair(a: Seq, b: Seq) -> Seq {
        match (a, b) {
            (Seq::Const(x), Seq::Const(y)) => Seq::Const(Elem::pair(x, y)),
            (a, b) => Seq::Pair(Box::new(a), Box::new(b)),
        }
    }

    pub fn is_const(&self) -> bool {
        match self {
            Seq::Const(_) => true,
            Seq::Nat { .. } | Seq::Below { .. } => false,
            Seq::Inl(s) | Seq::Inr(s) | Seq::Down(s) | Seq::Single(s) => s.is_const(),
            Seq::Pair(a, b) | Seq::Union(a, b) => a.is_const() && b.is_const(),
            Seq::Apply(_, s) => s.is_const(),
        }
    }

    /// Raw value at index `n`; carriers canonicalize it where needed.
    pub fn at(&self, n: usize) -> Elem {
        match self {
            Seq::Const(e) => e.clone(),
            Seq::Nat { from } => Elem::N(from + n as u64),
            Seq::Below { num, exp } => {
                let k = (n as u32).min(DYADIC_MAX_EXP.saturating_sub(exp + 1));
                let shift = k + 1;
                let e = exp + shift;
                Elem::dyadic((num << shift) - 1, e)
            }
            Seq::Inl(s) => Elem::left(s.at(n)),
            Seq::Inr(s) => Elem::right(s.at(n)),
            Seq::Pair(a, b) => Elem::pair(a.at(n), b.at(n)),
            Seq::Down(s) => Elem::down(s.at(n)),
            Seq::Single(s) => Elem::set(vec![s.at(n)]),
            Seq::Union(a, b) => {
                let mut v = set_items(a.at(n));
                v.extend(set_items(b.at(n)));
                Elem::set(v)
            }
            Seq::Apply(rule, s) => rule.apply_raw(&s.at(n)),
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Elem> {
        (0..n).map(|i| self.at(i)).collect()
    }
}

fn set_items(e: Elem) -> Vec<Elem> {
    match e {
        Elem::Set(v) => v,
        other => vec![other],
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Const(e) => write!(f, "{e}"),
            Seq::Nat { from: 0 } => write!(f, "ℕ"),
            Seq::Nat { from } => write!(f, "ℕ+{from}"),
            Seq::Below { num, exp } => write!(f, "<{num}/2^{exp}"),
            Seq::Inl(s) => write!(f, "inl {s}"),
            Seq::Inr(s) => write!(f, "inr {s}"),
            Seq::Pair(a, b) => write!(f, "{a}×{b}"),
            Seq::Down(s) => write!(f, "↓{s}"),
            Seq::Single(s) => write!(f, "{{{s}}}"),
            Seq::Union(a, b) => write!(f, "{a}∪{b}"),
            Seq::Apply(r, s) => write!(f, "{r:?}({s})"),
        }
    }
}

/// Compare dyadics `a ≤ b`.
pub fn dyadic_leq(a: (u64, u32), b: (u64, u32)) -> bool {
    let e = a.1.max(b.1);
    let x = (a.0 as u128) << (e - a.1);
    let y = (b.0 as u128) << (e - b.1);
    x <= y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_covers_every_tag() {
        let samples = vec![
            Elem::N(7),
            Elem::top(),
            Elem::Top(2),
            Elem::Bot(0),
            Elem::left(Elem::N(1)),
            Elem::right(Elem::top()),
            Elem::pair(Elem::N(3), Elem::N(5)),
            Elem::dyadic(3, 3),
            Elem::set(vec![Elem::N(2), Elem::N(1), Elem::N(2)]),
            Elem::Map(vec![Elem::N(0), Elem::N(1)]),
            Elem::down(Elem::N(4)),
            Elem::lim(Seq::pair(Seq::nat(), Seq::Const(Elem::N(2)))),
        ];
        for e in samples {
            let v = e.to_json();
            assert_eq!(Elem::from_json(&v).unwrap(), e, "{v}");
            let s = serde_json::to_string(&e).unwrap();
            let back: Elem = serde_json::from_str(&s).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn dyadics_normalize() {
        assert_eq!(Elem::dyadic(4, 3), Elem::Dy(1, 1));
        assert_eq!(Elem::dyadic(0, 5), Elem::Dy(0, 0));
        assert!(dyadic_leq((1, 2), (1, 1)));
        assert!(!dyadic_leq((3, 2), (1, 1)));
    }

    #[test]
    fn below_chain_increases_towards_its_limit() {
        let s = Seq::Below { num: 1, exp: 1 };
        let v: Vec<_> = s.prefix(5);
        assert_eq!(v[0], Elem::dyadic(1, 2));
        for w in v.windows(2) {
            let (Elem::Dy(a, e), Elem::Dy(b, f)) = (&w[0], &w[1]) else { panic!() };
            assert!(dyadic_leq((*a, *e), (*b, *f)));
            assert!(dyadic_leq((*b, *f), (1, 1)) && (*b, *f) != (1, 1));
        }
    }

    #[test]
    fn unknown_tags_are_rejected() {
        assert!(Elem::from_json(&json!("middle")).is_err());
        assert!(Elem::from_json(&json!({"q": 1})).is_err());
        assert!(Elem::from_json(&json!(-1)).is_err());
    }
}
