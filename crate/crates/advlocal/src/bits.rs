//! Bit strings and the two self-delimiting codecs used to pack advice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn new() -> Bits {
        Bits(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// `value` in exactly `width` bits, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Bits {
        Bits((0..width).rev().map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    pub fn to_uint(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn repeat(b: bool, n: usize) -> Bits {
        Bits(vec![b; n])
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Bits {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bits> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Bits)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Bits, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// ⌈log₂(x)⌉ for x ≥ 1 (0 for x ≤ 1).
pub fn ceil_log2(x: u64) -> usize {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as usize
    }
}

/// Packs `(slot index, string)` entries into one self-delimiting string.
/// Per entry: the index in ⌈log₂(k+1)⌉ bits, then w ones and a zero where
/// w = ⌈log₂(|L|+1)⌉, then |L| in w bits, then L. Entries go out in
/// ascending index order.
pub fn frame_encode(entries: &[(usize, Bits)], k: usize) -> Result<Bits> {
    let mut sorted: Vec<&(usize, Bits)> = entries.iter().collect();
    sorted.sort_by_key(|e| e.0);
    let iw = ceil_log2(k as u64 + 1);
    let mut out = Bits::new();
    for (pos, (i, l)) in sorted.iter().enumerate() {
        if *i == 0 || *i > k {
            return Err(Error::InvalidParams(format!("slot index {i} outside 1..={k}")));
        }
        if pos > 0 && sorted[pos - 1].0 == *i {
            return Err(Error::InvalidParams(format!("slot index {i} repeated")));
        }
        if l.is_empty() {
            return Err(Error::InvalidParams("framed strings must be nonempty".into()));
        }
        let w = ceil_log2(l.len() as u64 + 1);
        out.extend_from(&Bits::from_uint(*i as u64, iw));
        out.extend_from(&Bits::repeat(true, w));
        out.push(false);
        out.extend_from(&Bits::from_uint(l.len() as u64, w));
        out.extend_from(l);
    }
    Ok(out)
}

pub fn frame_decode(stream: &Bits, k: usize) -> Result<Vec<(usize, Bits)>> {
    let iw = ceil_log2(k as u64 + 1);
    let s = &stream.0;
    let mut pos = 0;
    let mut out: Vec<(usize, Bits)> = Vec::new();
    let take = |pos: &mut usize, n: usize, what: &str| -> Result<Bits> {
        if *pos + n > s.len() {
            return Err(Error::Decode(format!("truncated {what}")));
        }
        let b = Bits(s[*pos..*pos + n].to_vec());
        *pos += n;
        Ok(b)
    };
    while pos < s.len() {
        let i = take(&mut pos, iw, "slot index")?.to_uint() as usize;
        if i == 0 || i > k {
            return Err(Error::Decode(format!("slot index {i} outside 1..={k}")));
        }
        if out.last().is_some_and(|(j, _)| *j >= i) {
            return Err(Error::Decode("slot indices not ascending".into()));
        }
        let mut w = 0;
        loop {
            match s.get(pos) {
                Some(true) => w += 1,
                Some(false) => break,
                None => return Err(Error::Decode("truncated length field".into())),
            }
            pos += 1;
        }
        pos += 1;
        if w > 32 {
            return Err(Error::Decode("length field too wide".into()));
        }
        let len = take(&mut pos, w, "length field")?.to_uint() as usize;
        let l = take(&mut pos, len, "payload")?;
        out.push((i, l));
    }
    Ok(out)
}

/// Each 0 becomes γ+1 ones and a 0; each 1 becomes γ+2 ones and a 0.
pub fn runlength_encode(l: &Bits, gamma: usize) -> Result<Bits> {
    if gamma < 2 {
        return Err(Error::InvalidParams("run-length coding needs gamma >= 2".into()));
    }
    let mut out = Bits(Vec::with_capacity(l.len() * (gamma + 3)));
    for &b in &l.0 {
        let run = if b { gamma + 2 } else { gamma + 1 };
        out.0.extend(std::iter::repeat(true).take(run));
        out.push(false);
    }
    Ok(out)
}

pub fn runlength_decode(l: &Bits, gamma: usize) -> Result<Bits> {
    if gamma < 2 {
        return Err(Error::InvalidParams("run-length coding needs gamma >= 2".into()));
    }
    let mut out = Bits::new();
    let mut run = 0;
    for &b in &l.0 {
        if b {
            run += 1;
            continue;
        }
        out.push(run_to_bit(run, gamma)?);
        run = 0;
    }
    if run > 0 {
        return Err(Error::Decode("unterminated run".into()));
    }
    Ok(out)
}

pub(crate) fn run_to_bit(run: usize, gamma: usize) -> Result<bool> {
    if run == gamma + 1 {
        Ok(false)
    } else if run == gamma + 2 {
        Ok(true)
    } else {
        Err(Error::Decode(format!("run of {run} ones is neither {} nor {}", gamma + 1, gamma + 2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn frame_examples() {
        assert_eq!(frame_encode(&[(1, b("101"))], 2).unwrap(), b("0111011101"));
        assert_eq!(frame_encode(&[], 4).unwrap(), Bits::new());
        let entries = vec![(1, b("0")), (3, b("11"))];
        let enc = frame_encode(&entries, 3).unwrap();
        assert_eq!(frame_decode(&enc, 3).unwrap(), entries);
    }

    #[test]
    fn frame_errors() {
        assert!(frame_encode(&[(0, b("1"))], 2).is_err());
        assert!(frame_encode(&[(1, Bits::new())], 2).is_err());
        // Truncated length field.
        assert!(matches!(frame_decode(&b("0111"), 2), Err(Error::Decode(_))));
        // Index 3 with k = 2.
        assert!(matches!(frame_decode(&b("11101"), 2), Err(Error::Decode(_))));
    }

    #[test]
    fn runlength_examples() {
        assert_eq!(runlength_encode(&b("10"), 2).unwrap(), b("111101110"));
        assert_eq!(runlength_encode(&Bits::new(), 3).unwrap(), Bits::new());
        assert!(runlength_decode(&b("110"), 2).is_err());
        assert!(runlength_decode(&b("111"), 2).is_err());
        assert!(runlength_encode(&b("1"), 1).is_err());
    }

    #[test]
    fn uint_helpers() {
        assert_eq!(Bits::from_uint(5, 4).to_string(), "0101");
        assert_eq!(b("0101").to_uint(), 5);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    fn bits_strategy(max: usize) -> impl Strategy<Value = Bits> {
        proptest::collection::vec(any::<bool>(), 0..max).prop_map(Bits)
    }

    proptest! {
        #[test]
        fn runlength_roundtrip(l in bits_strategy(64), gamma in 2usize..9) {
            let enc = runlength_encode(&l, gamma).unwrap();
            prop_assert!(enc.len() <= (gamma + 3) * l.len());
            prop_assert_eq!(runlength_decode(&enc, gamma).unwrap(), l);
        }

        #[test]
        fn frame_roundtrip(k in 1usize..9, strings in proptest::collection::vec(bits_strategy(40), 0..9)) {
            let entries: Vec<(usize, Bits)> = strings
                .into_iter()
                .enumerate()
                .filter(|(i, s)| *i < k && !s.is_empty())
                .map(|(i, s)| (i + 1, s))
                .collect();
            let enc = frame_encode(&entries, k).unwrap();
            prop_assert_eq!(frame_decode(&enc, k).unwrap(), entries);
        }
    }
}
