use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::unit_f64;
use crate::scalar::{norm_sqr, Amplitude, Scalar};
use crate::welded_tree::Label;

/// Largest register the executors handle.
pub const MAX_WIRES: usize = 128;

pub(crate) fn mask(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

/// A classical bit string; bit `i` is wire `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    value: u128,
    len: usize,
}

impl Bits {
    pub fn new(value: u128, len: usize) -> Self {
        assert!(len <= MAX_WIRES);
        Self {
            value: value & mask(len),
            len,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn value(self) -> u128 {
        self.value
    }

    pub fn len(self) -> usize {
        self.len
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn bit(self, i: usize) -> bool {
        i < self.len && (self.value >> i) & 1 == 1
    }

    /// Truncates or pads with zeros to `len`.
    pub fn resized(self, len: usize) -> Self {
        Self::new(self.value, len)
    }

    /// The first `2n` bits read as a label, padding with zeros if short.
    pub fn label(self, n: u32) -> Label {
        Label((self.value & mask(2 * n as usize)) as u64)
    }

    pub fn to_bit_string(self) -> String {
        (0..self.len).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    /// Inverse of [`Bits::to_bit_string`].
    pub fn parse(s: &str) -> Option<Self> {
        if s.len() > MAX_WIRES {
            return None;
        }
        let mut v = 0u128;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v |= 1 << i,
                _ => return None,
            }
        }
        Some(Self::new(v, s.len()))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bits::parse(&s).ok_or_else(|| serde::de::Error::custom("expected a string of 0 and 1"))
    }
}

/// Sparse pure state. Wires `0..live` are live; wires `live..width` were
/// discarded or traced out and are kept only so the state stays pure.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Scalar = f64> {
    width: usize,
    live: usize,
    amps: BTreeMap<u128, Amplitude<T>>,
}

impl<T: Scalar> PureState<T> {
    pub fn basis(bits: Bits) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(bits.value(), Complex::new(T::one(), T::zero()));
        Self {
            width: bits.len(),
            live: bits.len(),
            amps,
        }
    }

    /// State from explicit amplitudes; nothing is normalized.
    pub fn from_amplitudes(width: usize, amps: impl IntoIterator<Item = (u128, Amplitude<T>)>) -> Result<Self> {
        if width > MAX_WIRES {
            return Err(Error::WidthCap { width, cap: MAX_WIRES });
        }
        let mut map = BTreeMap::new();
        for (k, a) in amps {
            if k & !mask(width) != 0 {
                return Err(Error::WidthMismatch {
                    expected: width,
                    got: 128 - k.leading_zeros() as usize,
                });
            }
            *map.entry(k).or_insert_with(Complex::default) += a;
        }
        Ok(Self {
            width,
            live: width,
            amps: map,
        })
    }

    pub(crate) fn from_parts(width: usize, live: usize, amps: BTreeMap<u128, Amplitude<T>>) -> Self {
        Self { width, live, amps }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn live(&self) -> usize {
        self.live
    }

    /// Number of stored amplitudes.
    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, key: u128) -> Amplitude<T> {
        self.amps.get(&key).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, Amplitude<T>)> + '_ {
        self.amps.iter().map(|(&k, &a)| (k, a))
    }

    pub(crate) fn amps(&self) -> &BTreeMap<u128, Amplitude<T>> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.values().map(|&a| norm_sqr(a)).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState<T>) -> Amplitude<T> {
        let mut acc = Complex::default();
        for (k, a) in &self.amps {
            if let Some(b) = other.amps.get(k) {
                acc += a.conj() * b;
            }
        }
        acc
    }

    /// Drops amplitudes with modulus below `threshold`.
    pub fn prune(&mut self, threshold: f64) {
        let t2 = T::lit(threshold * threshold);
        self.amps.retain(|_, a| norm_sqr(*a) >= t2);
    }

    /// Born-rule distribution over the live wires.
    pub fn live_distribution(&self) -> BTreeMap<u128, f64> {
        let m = mask(self.live);
        let mut out = BTreeMap::new();
        for (&k, &a) in &self.amps {
            *out.entry(k & m).or_insert(0.0) += norm_sqr(a).to_f64_lossy();
        }
        out
    }

    /// Samples one full basis state (keys in increasing order, one uniform draw).
    pub fn sample_key<R: RngCore>(&self, rng: &mut R) -> u128 {
        let total: f64 = self.amps.values().map(|&a| norm_sqr(a).to_f64_lossy()).sum();
        let u = unit_f64(rng.next_u64()) * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (&k, &a) in &self.amps {
            let p = norm_sqr(a).to_f64_lossy();
            if p == 0.0 {
                continue;
            }
            acc += p;
            last = k;
            if u < acc {
                return k;
            }
        }
        last
    }

    /// Measures every wire and returns the live ones.
    pub fn measure_live<R: RngCore>(&self, rng: &mut R) -> Bits {
        Bits::new(self.sample_key(rng), self.live)
    }

    /// Splits the state by the outcome on wires `0..r`: for each outcome,
    /// its probability and the normalized conditional state.
    pub fn condition_on_low(&self, r: usize) -> Vec<(u128, f64, PureState<T>)> {
        let m = mask(r);
        let mut groups: BTreeMap<u128, BTreeMap<u128, Amplitude<T>>> = BTreeMap::new();
        for (&k, &a) in &self.amps {
            groups.entry(k & m).or_default().insert(k, a);
        }
        groups
            .into_iter()
            .map(|(outcome, amps)| {
                let p: T = amps.values().map(|&a| norm_sqr(a)).sum();
                let scale = T::one() / p.sqrt();
                let amps = amps.into_iter().map(|(k, a)| (k, a * scale)).collect();
                (outcome, p.to_f64_lossy(), Self::from_parts(self.width, self.live, amps))
            })
            .collect()
    }

    /// Replaces wires `0..r` with `value` in every basis state.
    pub fn overwrite_low(&self, r: usize, value: u128) -> PureState<T> {
        let m = mask(r);
        let mut amps = BTreeMap::new();
        for (&k, &a) in &self.amps {
            *amps.entry((k & !m) | (value & m)).or_insert_with(Complex::default) += a;
        }
        Self::from_parts(self.width, self.live, amps)
    }

    /// Converts the amplitudes to another scalar type.
    pub fn cast<U: Scalar>(&self) -> PureState<U> {
        PureState {
            width: self.width,
            live: self.live,
            amps: self
                .amps
                .iter()
                .map(|(&k, a)| (k, Complex::new(U::lit(a.re.to_f64_lossy()), U::lit(a.im.to_f64_lossy()))))
                .collect(),
        }
    }
}

/// Probabilities of output bit strings.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputDistribution {
    pub probs: BTreeMap<Bits, f64>,
}

impl OutputDistribution {
    pub fn point(b: Bits) -> Self {
        Self {
            probs: BTreeMap::from([(b, 1.0)]),
        }
    }

    pub fn add(&mut self, b: Bits, p: f64) {
        *self.probs.entry(b).or_insert(0.0) += p;
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn prob(&self, b: &Bits) -> f64 {
        self.probs.get(b).copied().unwrap_or(0.0)
    }

    /// Probability that the output, read as a label, equals `target`.
    pub fn label_prob(&self, n: u32, target: Label) -> f64 {
        self.probs.iter().filter(|(b, _)| b.label(n) == target).map(|(_, p)| p).sum()
    }

    /// Marginal over the first `2n` bits.
    pub fn label_distribution(&self, n: u32) -> BTreeMap<Label, f64> {
        let mut out = BTreeMap::new();
        for (b, p) in &self.probs {
            *out.entry(b.label(n)).or_insert(0.0) += p;
        }
        out
    }

    /// Half the 1-norm distance.
    pub fn total_variation(&self, other: &OutputDistribution) -> f64 {
        let mut keys: Vec<&Bits> = self.probs.keys().chain(other.probs.keys()).collect();
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys.into_iter().map(|k| (self.prob(k) - other.prob(k)).abs()).sum::<f64>()
    }

    /// Empirical distribution of samples.
    pub fn from_samples(samples: &[Bits]) -> Self {
        let mut d = Self::default();
        let w = 1.0 / samples.len().max(1) as f64;
        for &s in samples {
            d.add(s, w);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn bits_text_round_trip() {
        let b = Bits::new(0b1101, 6);
        assert_eq!(b.to_bit_string(), "101100");
        assert_eq!(Bits::parse("101100"), Some(b));
        assert_eq!(b.resized(2), Bits::new(1, 2));
    }

    #[test]
    fn label_reads_low_bits() {
        let b = Bits::new(0b11_0110, 6);
        assert_eq!(b.label(2), Label(0b0110));
        assert_eq!(Bits::new(1, 1).label(2), Label(1));
    }

    #[test]
    fn sampling_follows_weights() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::<f64>::from_amplitudes(1, [(0, Complex::new(h, 0.0)), (1, Complex::new(h, 0.0))]).unwrap();
        let mut rng = rng_from_seed(3);
        let ones = (0..10_000).filter(|_| s.measure_live(&mut rng).bit(0)).count();
        assert!((ones as f64 / 1e4 - 0.5).abs() < 0.02);
    }

    #[test]
    fn conditioning_normalizes() {
        let a = Complex::new(0.5, 0.0);
        let s = PureState::<f64>::from_amplitudes(2, (0..4).map(|k| (k, a))).unwrap();
        let parts = s.condition_on_low(1);
        assert_eq!(parts.len(), 2);
        for (_, p, st) in parts {
            assert!((p - 0.5).abs() < 1e-15);
            assert!((st.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tv_of_disjoint_points() {
        let a = OutputDistribution::point(Bits::new(0, 2));
        let b = OutputDistribution::point(Bits::new(1, 2));
        assert_eq!(a.total_variation(&b), 1.0);
        assert_eq!(a.total_variation(&a), 0.0);
    }
}
