//! K-theory profiles of coefficient rings.
//!
//! A profile holds `K_q(R)` and the Nil-terms `NK_q(R)` over a declared interval of
//! degrees. Entries that are not known are stored as [`Entry::Unknown`] and any query
//! on them fails; nothing defaults to zero except the negative K-groups and Nil-terms
//! of a regular ring.
//!
//! # Document format
//!
//! Profiles are TOML documents with sections `[meta]`, `[K]`, `[NK]` and an optional
//! `[notes]`. Group values use the canonical rendering of [`crate::abelian`]; `"?"`
//! marks an unknown entry. `#` starts a comment.
//!
//! ```toml
//! [meta]
//! name = "Z[C2]"
//! regular = false
//! q_range = [-1, 1]
//!
//! [K]
//! -1 = "0"
//! 0 = "Z"
//! 1 = "(Z/2)^2"
//!
//! [NK]
//! -1 = "?"
//! 0 = "0"
//! 1 = "0"
//!
//! [notes]
//! "K[1]" = "units of the group ring"
//! ```
//!
//! Every degree in `q_range` needs a `[K]` entry and, for non-regular rings, an
//! `[NK]` entry. Regular profiles may omit `[NK]`; it is then zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::abelian::{AbelianGroup, ExtNat, GroupValue, SymbolicRank};
use crate::document::{from_toml, parse_error, quote};
use crate::error::ProfileError;

/// Names accepted by [`builtin`], besides `F<q>` for any prime power `q`.
pub const BUILTIN_NAMES: [&str; 5] = ["Z", "F2", "Z[C2]", "Z[C2xC2]", "Z[C4]"];

/// Largest degree tabulated for finite fields.
const FIELD_Q_MAX: i64 = 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Known(GroupValue),
    Unknown,
}

impl Entry {
    pub fn render(&self) -> String {
        match self {
            Entry::Known(v) => v.to_string(),
            Entry::Unknown => "?".to_string(),
        }
    }
}

impl From<AbelianGroup> for Entry {
    fn from(g: AbelianGroup) -> Self {
        Entry::Known(g.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Table {
    K,
    Nk,
}

impl Table {
    fn label(self) -> &'static str {
        match self {
            Table::K => "K",
            Table::Nk => "NK",
        }
    }
}

/// K-groups and Nil-terms of one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryProfile {
    name: String,
    regular: bool,
    q_min: i64,
    q_max: i64,
    k_table: BTreeMap<i64, Entry>,
    nk_table: BTreeMap<i64, Entry>,
    notes: BTreeMap<String, String>,
}

impl KTheoryProfile {
    /// Builds and validates a profile.
    pub fn new(
        name: &str,
        regular: bool,
        (q_min, q_max): (i64, i64),
        k_table: BTreeMap<i64, Entry>,
        mut nk_table: BTreeMap<i64, Entry>,
        notes: BTreeMap<String, String>,
    ) -> Result<Self, ProfileError> {
        if name.trim().is_empty() {
            return Err(ProfileError::Invariant("profile name must not be empty".into()));
        }
        if q_min > q_max {
            return Err(ProfileError::Invariant(format!(
                "empty q_range [{q_min}, {q_max}]"
            )));
        }
        if regular {
            for q in q_min..=q_max {
                nk_table.entry(q).or_insert(Entry::Known(GroupValue::zero()));
            }
        }
        let profile = KTheoryProfile {
            name: name.to_string(),
            regular,
            q_min,
            q_max,
            k_table,
            nk_table,
            notes,
        };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<(), ProfileError> {
        for (table, map) in [(Table::K, &self.k_table), (Table::Nk, &self.nk_table)] {
            for q in self.q_min..=self.q_max {
                if !map.contains_key(&q) {
                    return Err(ProfileError::Invariant(format!(
                        "missing {}[{q}] in declared range",
                        table.label()
                    )));
                }
            }
            if let Some(q) = map.keys().find(|q| !(self.q_min..=self.q_max).contains(*q)) {
                return Err(ProfileError::Invariant(format!(
                    "{}[{q}] lies outside q_range [{}, {}]",
                    table.label(),
                    self.q_min,
                    self.q_max
                )));
            }
        }
        if self.regular {
            let nonzero = |e: &Entry| !matches!(e, Entry::Known(v) if v.is_zero());
            if self.k_table.range(..0).any(|(_, e)| nonzero(e)) {
                return Err(ProfileError::Invariant(
                    "regular ring must have zero negative K".into(),
                ));
            }
            if self.nk_table.values().any(nonzero) {
                return Err(ProfileError::Invariant(
                    "regular ring must have zero Nil-terms".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn q_range(&self) -> (i64, i64) {
        (self.q_min, self.q_max)
    }

    pub fn notes(&self) -> &BTreeMap<String, String> {
        &self.notes
    }

    fn lookup(&self, table: Table, q: i64) -> Result<GroupValue, ProfileError> {
        if q < self.q_min || q > self.q_max {
            if self.regular && q < 0 {
                return Ok(GroupValue::zero());
            }
            return Err(ProfileError::OutOfRange {
                ring: self.name.clone(),
                q,
                q_min: self.q_min,
                q_max: self.q_max,
            });
        }
        let map = match table {
            Table::K => &self.k_table,
            Table::Nk => &self.nk_table,
        };
        match &map[&q] {
            Entry::Known(v) => Ok(v.clone()),
            Entry::Unknown => Err(ProfileError::UnknownEntry {
                ring: self.name.clone(),
                table: table.label(),
                q,
            }),
        }
    }

    /// `K_q(R)`.
    pub fn get_k(&self, q: i64) -> Result<GroupValue, ProfileError> {
        self.lookup(Table::K, q)
    }

    /// `NK_q(R)`.
    pub fn get_nk(&self, q: i64) -> Result<GroupValue, ProfileError> {
        self.lookup(Table::Nk, q)
    }

    /// Raw table entries, for display.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &Entry, &Entry)> + '_ {
        (self.q_min..=self.q_max).map(|q| (q, &self.k_table[&q], &self.nk_table[&q]))
    }

    /// Renders the profile in the document format; [`load_profile`] inverts it.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        writeln!(out, "[meta]").unwrap();
        writeln!(out, "name = {}", quote(&self.name)).unwrap();
        writeln!(out, "regular = {}", self.regular).unwrap();
        writeln!(out, "q_range = [{}, {}]", self.q_min, self.q_max).unwrap();
        for (label, map) in [("K", &self.k_table), ("NK", &self.nk_table)] {
            writeln!(out, "\n[{label}]").unwrap();
            for (q, e) in map {
                writeln!(out, "{q} = {}", quote(&e.render())).unwrap();
            }
        }
        if !self.notes.is_empty() {
            writeln!(out, "\n[notes]").unwrap();
            for (k, v) in &self.notes {
                writeln!(out, "{} = {}", quote(k), quote(v)).unwrap();
            }
        }
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    name: String,
    regular: bool,
    q_range: [i64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    meta: RawMeta,
    #[serde(rename = "K")]
    k: BTreeMap<String, toml::Spanned<String>>,
    #[serde(rename = "NK", default)]
    nk: BTreeMap<String, toml::Spanned<String>>,
    #[serde(default)]
    notes: BTreeMap<String, String>,
}

fn parse_table(
    source: &str,
    table: &str,
    raw: BTreeMap<String, toml::Spanned<String>>,
) -> Result<BTreeMap<i64, Entry>, ProfileError> {
    let mut out = BTreeMap::new();
    for (key, value) in raw {
        let span = value.span();
        let q: i64 = key.trim().parse().map_err(|_| {
            parse_error(source, Some(span.clone()), format!("[{table}] key `{key}` is not an integer degree"))
        })?;
        let text = value.into_inner();
        let entry = if text.trim() == "?" {
            Entry::Unknown
        } else {
            let v: GroupValue = text
                .parse()
                .map_err(|e| parse_error(source, Some(span), format!("{table}[{q}]: {e}")))?;
            Entry::Known(v)
        };
        out.insert(q, entry);
    }
    Ok(out)
}

/// Parses and validates a profile document.
pub fn load_profile(source: &str) -> Result<KTheoryProfile, ProfileError> {
    let raw: RawProfile = from_toml(source)?;
    let k = parse_table(source, "K", raw.k)?;
    let nk = parse_table(source, "NK", raw.nk)?;
    KTheoryProfile::new(
        &raw.meta.name,
        raw.meta.regular,
        (raw.meta.q_range[0], raw.meta.q_range[1]),
        k,
        nk,
        raw.notes,
    )
}

fn table(entries: &[(i64, Entry)]) -> BTreeMap<i64, Entry> {
    entries.iter().cloned().collect()
}

fn notes(entries: &[(&str, &str)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn c(n: u64) -> AbelianGroup {
    AbelianGroup::cyclic(n)
}

fn integers() -> KTheoryProfile {
    let z = AbelianGroup::free(1u64);
    let zero = AbelianGroup::zero();
    let k = table(&[
        (-1, zero.clone().into()),
        (0, z.clone().into()),
        (1, c(2).into()),
        (2, c(2).into()),
        (3, c(48).into()),
        (4, zero.clone().into()),
        (5, z.into()),
        (6, zero.into()),
        (7, c(240).into()),
    ]);
    KTheoryProfile::new(
        "Z",
        true,
        (-1, 7),
        k,
        BTreeMap::new(),
        notes(&[("K[*]", "lower and higher K-theory of the integers")]),
    )
    .expect("builtin profile is valid")
}

/// `K_*(F_q)` from Quillen's computation: `K_0 = ℤ`, `K_{2i-1} = ℤ/(q^i - 1)`,
/// `K_{2i} = 0`.
pub fn finite_field(order: u64) -> Result<KTheoryProfile, ProfileError> {
    let factors = crate::abelian::factorize(order as u128).map_err(ProfileError::from)?;
    if order < 2 || factors.len() != 1 {
        return Err(ProfileError::UnknownRing(format!(
            "F{order}: field order must be a prime power"
        )));
    }
    let mut k = BTreeMap::new();
    k.insert(0, Entry::from(AbelianGroup::free(1u64)));
    let mut q_max = 0;
    for q in 1..=FIELD_Q_MAX {
        let entry = if q % 2 == 0 {
            AbelianGroup::zero()
        } else {
            let i = ((q + 1) / 2) as u32;
            let Some(size) = (order as u128).checked_pow(i) else {
                break;
            };
            if size - 1 > crate::abelian::MAX_FACTOR_ORDER {
                break;
            }
            match size - 1 {
                1 => AbelianGroup::zero(),
                m => crate::abelian::normalize(&[(m as i128, ExtNat::ONE)])?,
            }
        };
        k.insert(q, entry.into());
        q_max = q;
    }
    k.insert(-1, AbelianGroup::zero().into());
    KTheoryProfile::new(
        &format!("F{order}"),
        true,
        (-1, q_max),
        k,
        BTreeMap::new(),
        notes(&[("K[*]", "Quillen: K_{2i-1} = Z/(q^i - 1), K_{2i} = 0")]),
    )
}

fn group_ring(
    name: &str,
    k1: AbelianGroup,
    k_minus_1: AbelianGroup,
    nil: AbelianGroup,
    k_minus_1_note: &str,
) -> KTheoryProfile {
    let k = table(&[
        (-1, k_minus_1.into()),
        (0, AbelianGroup::free(1u64).into()),
        (1, k1.into()),
    ]);
    let nk = table(&[(-1, Entry::Unknown), (0, nil.clone().into()), (1, nil.into())]);
    KTheoryProfile::new(
        name,
        false,
        (-1, 1),
        k,
        nk,
        notes(&[
            ("K[1]", "units of the group ring (SK_1 vanishes)"),
            ("K[0]", "reduced K_0 vanishes"),
            ("K[-1]", k_minus_1_note),
            ("NK[*]", "Nil-terms of the group ring"),
        ]),
    )
    .expect("builtin profile is valid")
}

/// Profiles shipped with the crate: `Z`, `F<q>` for a prime power `q`, `Z[C2]`,
/// `Z[C2xC2]` and `Z[C4]`.
pub fn builtin(name: &str) -> Result<KTheoryProfile, ProfileError> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let omega_c2 = AbelianGroup::cyclic_mult(2, ExtNat::Omega);
    match key.as_str() {
        "Z" => Ok(integers()),
        "Z[C2]" => Ok(group_ring(
            "Z[C2]",
            AbelianGroup::cyclic_mult(2, 2u64),
            AbelianGroup::zero(),
            AbelianGroup::zero(),
            "vanishes",
        )),
        "Z[C2xC2]" => Ok(group_ring(
            "Z[C2xC2]",
            AbelianGroup::cyclic_mult(2, 3u64),
            AbelianGroup::symbolic(SymbolicRank::positive("r")),
            omega_c2,
            "free of positive rank r depending on Schur indices",
        )),
        "Z[C4]" => Ok(group_ring(
            "Z[C4]",
            c(2).direct_sum(&c(4)),
            AbelianGroup::symbolic(SymbolicRank::positive("s")),
            omega_c2,
            "free of positive rank s depending on Schur indices",
        )),
        other => {
            let order = other
                .strip_prefix('F')
                .or_else(|| other.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')))
                .and_then(|s| s.parse::<u64>().ok());
            match order {
                Some(q) => finite_field(q),
                None => Err(ProfileError::UnknownRing(name.to_string())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupValue {
        s.parse().unwrap()
    }

    #[test]
    fn integer_table() {
        let z = builtin("Z").unwrap();
        let expected = ["Z", "Z/2", "Z/2", "Z/48", "0", "Z", "0", "Z/240"];
        for (q, e) in expected.iter().enumerate() {
            assert_eq!(z.get_k(q as i64).unwrap(), g(e), "K_{q}(Z)");
        }
        assert_eq!(z.get_k(-3).unwrap(), GroupValue::zero());
        assert_eq!(z.get_nk(-3).unwrap(), GroupValue::zero());
        assert!(matches!(z.get_k(8), Err(ProfileError::OutOfRange { .. })));
    }

    #[test]
    fn f2_matches_quillen_and_table() {
        let f2 = builtin("F2").unwrap();
        for (q, e) in [(0, "Z"), (1, "0"), (2, "0"), (3, "Z/3"), (5, "Z/7"), (7, "Z/3 (+) Z/5")] {
            assert_eq!(f2.get_k(q).unwrap(), g(e), "K_{q}(F2)");
        }
        assert_eq!(f2.get_k(-2).unwrap(), GroupValue::zero());
        let f9 = builtin("F9").unwrap();
        assert_eq!(f9.get_k(1).unwrap(), g("Z/8"));
        assert_eq!(f9.get_k(3).unwrap(), g("Z/16 (+) Z/5"));
        assert!(builtin("F6").is_err());
        assert_eq!(builtin("GF(4)").unwrap().get_k(1).unwrap(), g("Z/3"));
    }

    #[test]
    fn group_ring_tables() {
        let c4 = builtin("Z[C4]").unwrap();
        assert_eq!(c4.get_k(1).unwrap(), g("Z/2 (+) Z/4"));
        assert_eq!(c4.get_k(-1).unwrap(), g("Z^s[1..w]"));
        let v4 = builtin("Z[C2xC2]").unwrap();
        assert_eq!(v4.get_nk(0).unwrap(), g("(+)_{w} Z/2"));
        assert_eq!(v4.get_k(1).unwrap(), g("(Z/2)^3"));
        let c2 = builtin("Z[C2]").unwrap();
        assert!(matches!(c2.get_k(2), Err(ProfileError::OutOfRange { .. })));
        assert!(matches!(c2.get_nk(-1), Err(ProfileError::UnknownEntry { .. })));
        assert!(!c2.is_regular());
    }

    #[test]
    fn regular_invariants_checked_at_load() {
        let doc = "[meta]\nname = \"bad\"\nregular = true\nq_range = [-1, 0]\n[K]\n-1 = \"Z\"\n0 = \"Z\"\n";
        let err = load_profile(doc).unwrap_err();
        assert_eq!(
            err,
            ProfileError::Invariant("regular ring must have zero negative K".into())
        );
        let doc = "[meta]\nname = \"bad\"\nregular = true\nq_range = [0, 0]\n[K]\n0 = \"Z\"\n[NK]\n0 = \"Z/2\"\n";
        assert!(load_profile(doc).is_err());
    }

    #[test]
    fn load_errors_carry_positions() {
        assert!(matches!(load_profile(""), Err(ProfileError::Parse { .. })));
        let doc = "[meta]\nname = \"x\"\nregular = false\nq_range = [0, 0]\n[K]\n0 = \"Q\"\n[NK]\n0 = \"0\"\n";
        match load_profile(doc) {
            Err(ProfileError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        let doc = "[meta]\nname = \"x\"\nregular = false\nq_range = [0, 1]\n[K]\n0 = \"Z\"\n1 = \"Z\"\n[NK]\n0 = \"0\"\n";
        assert!(matches!(load_profile(doc), Err(ProfileError::Invariant(_))));
    }

    #[test]
    fn documents_round_trip() {
        for name in BUILTIN_NAMES.iter().copied().chain(["F9", "F5"]) {
            let p = builtin(name).unwrap();
            let doc = p.to_document();
            assert_eq!(load_profile(&doc).unwrap(), p, "{name}\n{doc}");
        }
    }

    #[test]
    fn hand_written_integer_document() {
        let doc = r#"
# lower and higher K-theory of the integers
[meta]
name = "Z"
regular = true
q_range = [-1, 7]

[K]
-1 = "0"
0 = "Z"
1 = "Z/2"
2 = "Z/2"
3 = "Z/48"
4 = "0"
5 = "Z"
6 = "0"
7 = "Z/240"

[notes]
"K[*]" = "lower and higher K-theory of the integers"
"#;
        assert_eq!(load_profile(doc).unwrap(), builtin("Z").unwrap());
    }
}
