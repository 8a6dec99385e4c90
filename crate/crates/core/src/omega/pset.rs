use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An eventually periodic subset of ℕ.
///
/// `x < threshold` is a member iff `prefix[x]`; otherwise iff
/// `residues[x % period]`. Values are always kept canonical (minimal period,
/// then minimal threshold), so `==` is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSet {
    prefix: Vec<bool>,
    period: usize,
    residues: Vec<bool>,
}

impl PeriodicSet {
    /// Builds the set whose membership is `f(x)`, assuming `f` is periodic
    /// with period `period` from `threshold` on.
    pub fn from_fn(threshold: usize, period: usize, f: impl Fn(usize) -> bool) -> PeriodicSet {
        let period = period.max(1);
        let prefix = (0..threshold).map(&f).collect();
        let mut residues = vec![false; period];
        for x in threshold..threshold + period {
            residues[x % period] = f(x);
        }
        PeriodicSet {
            prefix,
            period,
            residues,
        }
        .canonical()
    }

    pub fn new(prefix: Vec<bool>, period: usize, residues: Vec<bool>) -> Result<PeriodicSet> {
        if period == 0 || residues.len() != period {
            return Err(Error::PeriodicSet(format!(
                "period {period} needs exactly {period} residue flags, found {}",
                residues.len()
            )));
        }
        Ok(PeriodicSet {
            prefix,
            period,
            residues,
        }
        .canonical())
    }

    pub fn empty() -> PeriodicSet {
        PeriodicSet::from_fn(0, 1, |_| false)
    }

    pub fn naturals() -> PeriodicSet {
        PeriodicSet::from_fn(0, 1, |_| true)
    }

    pub fn finite(elements: &[usize]) -> PeriodicSet {
        let t = elements.iter().max().map_or(0, |m| m + 1);
        PeriodicSet::from_fn(t, 1, |x| elements.contains(&x))
    }

    /// `{lo, …, hi−1}`.
    pub fn range(lo: usize, hi: usize) -> PeriodicSet {
        PeriodicSet::from_fn(hi, 1, |x| lo <= x && x < hi)
    }

    /// `{x ≥ from : x ≡ r (mod m)}`.
    pub fn residue_class(r: usize, m: usize, from: usize) -> PeriodicSet {
        PeriodicSet::from_fn(from, m, |x| x >= from && x % m == r % m)
    }

    pub fn odds() -> PeriodicSet {
        PeriodicSet::residue_class(1, 2, 0)
    }

    pub fn evens() -> PeriodicSet {
        PeriodicSet::residue_class(0, 2, 0)
    }

    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn residues(&self) -> &[bool] {
        &self.residues
    }

    pub fn contains(&self, x: usize) -> bool {
        match self.prefix.get(x) {
            Some(&b) => b,
            None => self.residues[x % self.period],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.residues.iter().all(|&b| !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|&b| !b)
    }

    pub fn is_naturals(&self) -> bool {
        *self == PeriodicSet::naturals()
    }

    /// Members below `bound`.
    pub fn members_below(&self, bound: usize) -> Vec<usize> {
        (0..bound).filter(|&x| self.contains(x)).collect()
    }

    fn canonical(mut self) -> PeriodicSet {
        let p = self.period;
        let r = &self.residues;
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (0..p).all(|i| r[i] == r[(i + d) % p]))
            .unwrap_or(p);
        if d < p {
            self.residues.truncate(d);
            self.period = d;
        }
        while let Some(&last) = self.prefix.last() {
            let x = self.prefix.len() - 1;
            if last != self.residues[x % self.period] {
                break;
            }
            self.prefix.pop();
        }
        self
    }

    fn combine(&self, other: &PeriodicSet, f: impl Fn(bool, bool) -> bool) -> PeriodicSet {
        PeriodicSet::from_fn(
            self.threshold().max(other.threshold()),
            self.period.lcm(&other.period),
            |x| f(self.contains(x), other.contains(x)),
        )
    }

    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> PeriodicSet {
        PeriodicSet::from_fn(self.threshold(), self.period, |x| !self.contains(x))
    }

    /// `{s + k : s ∈ S}`.
    pub fn shift(&self, k: usize) -> PeriodicSet {
        PeriodicSet::from_fn(self.threshold() + k, self.period, |x| x >= k && self.contains(x - k))
    }

    /// `{s − k : s ∈ S, s ≥ k}`.
    pub fn unshift(&self, k: usize) -> PeriodicSet {
        PeriodicSet::from_fn(self.threshold().saturating_sub(k), self.period, |x| self.contains(x + k))
    }

    pub fn is_subset(&self, other: &PeriodicSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &PeriodicSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Human-readable description, e.g. `{0,1} ∪ {x ≥ 2 : x ≡ 1 mod 2}`.
    pub fn describe(&self) -> String {
        let head: Vec<String> = (0..self.threshold())
            .filter(|&x| self.prefix[x])
            .map(|x| x.to_string())
            .collect();
        let res: Vec<String> = (0..self.period)
            .filter(|&r| self.residues[r])
            .map(|r| r.to_string())
            .collect();
        let tail = if res.is_empty() {
            None
        } else if res.len() == self.period {
            Some(format!("{{x ≥ {}}}", self.threshold()))
        } else {
            Some(format!("{{x ≥ {} : x mod {} ∈ {{{}}}}}", self.threshold(), self.period, res.join(",")))
        };
        match (head.is_empty(), tail) {
            (true, None) => "∅".into(),
            (false, None) => format!("{{{}}}", head.join(",")),
            (true, Some(t)) => t,
            (false, Some(t)) => format!("{{{}}} ∪ {}", head.join(","), t),
        }
    }
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.prefix.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let res: Vec<String> = (0..self.period)
            .filter(|&r| self.residues[r])
            .map(|r| r.to_string())
            .collect();
        write!(f, "prefix={bits};period={};residues={{{}}}", self.period, res.join(","))
    }
}

impl Serialize for PeriodicSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::PeriodicSet(format!("expected a braced list, found `{s}`")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::PeriodicSet(format!("bad number `{t}`"))))
        .collect()
}

impl FromStr for PeriodicSet {
    type Err = Error;

    /// Accepts the canonical text form, a finite list like `{0,2}`, or the
    /// words `empty` and `N`.
    fn from_str(s: &str) -> Result<PeriodicSet> {
        let s = s.trim();
        match s {
            "empty" | "{}" => return Ok(PeriodicSet::empty()),
            "N" | "naturals" => return Ok(PeriodicSet::naturals()),
            _ => {}
        }
        if s.starts_with('{') {
            return Ok(PeriodicSet::finite(&parse_list(s)?));
        }
        let mut prefix = None;
        let mut period = None;
        let mut residues = None;
        for part in s.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::PeriodicSet(format!("expected key=value, found `{part}`")))?;
            match key.trim() {
                "prefix" => {
                    prefix = Some(
                        value
                            .trim()
                            .chars()
                            .map(|c| match c {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                _ => Err(Error::PeriodicSet(format!("bad prefix bit `{c}`"))),
                            })
                            .collect::<Result<Vec<bool>>>()?,
                    )
                }
                "period" => {
                    period = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| Error::PeriodicSet(format!("bad period `{value}`")))?,
                    )
                }
                "residues" => residues = Some(parse_list(value)?),
                k => return Err(Error::PeriodicSet(format!("unknown key `{k}`"))),
            }
        }
        let (Some(prefix), Some(period), Some(res)) = (prefix, period, residues) else {
            return Err(Error::PeriodicSet("need prefix, period and residues".into()));
        };
        if period == 0 {
            return Err(Error::PeriodicSet("period must be positive".into()));
        }
        if let Some(&r) = res.iter().find(|&&r| r >= period) {
            return Err(Error::PeriodicSet(format!("residue {r} not below period {period}")));
        }
        let flags = (0..period).map(|r| res.contains(&r)).collect();
        PeriodicSet::new(prefix, period, flags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = PeriodicSet::finite(&[0]).complement();
        assert_eq!(c.to_string(), "prefix=0;period=1;residues={0}");
        let u = PeriodicSet::finite(&[0, 1]).union(&PeriodicSet::residue_class(1, 2, 3));
        assert_eq!(u, PeriodicSet::finite(&[0, 1]).union(&PeriodicSet::odds()));
        assert_eq!(u.members_below(9), vec![0, 1, 3, 5, 7]);
        let a = PeriodicSet::finite(&[2]).complement();
        let b = PeriodicSet::finite(&[4]).complement();
        assert_eq!(a.intersect(&b), PeriodicSet::finite(&[2, 4]).complement());
    }

    #[test]
    fn canonical_forms() {
        let s = PeriodicSet::new(vec![true, false, true, false], 4, vec![true, false, true, false]).unwrap();
        assert_eq!(s, PeriodicSet::evens());
        assert_eq!(s.threshold(), 0);
        assert_eq!(s.period(), 2);
    }

    #[test]
    fn text_round_trip() {
        for s in [
            PeriodicSet::empty(),
            PeriodicSet::naturals(),
            PeriodicSet::odds().union(&PeriodicSet::finite(&[0])),
            PeriodicSet::range(3, 7),
        ] {
            assert_eq!(s.to_string().parse::<PeriodicSet>().unwrap(), s);
        }
        assert_eq!("{0, 2}".parse::<PeriodicSet>().unwrap(), PeriodicSet::finite(&[0, 2]));
        assert!("prefix=2;period=1;residues={}".parse::<PeriodicSet>().is_err());
        assert!("prefix=;period=2;residues={2}".parse::<PeriodicSet>().is_err());
    }

    #[test]
    fn shifts() {
        let s = PeriodicSet::odds();
        assert_eq!(s.shift(1), PeriodicSet::residue_class(0, 2, 2));
        assert_eq!(s.shift(3).unshift(3), s);
        assert_eq!(PeriodicSet::range(0, 3).unshift(2), PeriodicSet::finite(&[0]));
    }

    #[test]
    fn describe() {
        let s = PeriodicSet::finite(&[0, 1]).union(&PeriodicSet::odds());
        assert_eq!(s.describe(), "{0} ∪ {x ≥ 1 : x mod 2 ∈ {1}}");
        assert_eq!(PeriodicSet::empty().describe(), "∅");
    }
}
