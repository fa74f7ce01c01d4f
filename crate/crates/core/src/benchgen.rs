//! Seeded benchmark circuit generators and suite manifests.
//!
//! All generators are pure functions of their parameters: the PRNG is
//! ChaCha8 (recorded in every manifest) so the same manifest regenerates
//! byte-identical circuits on any platform.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

pub const MANIFEST_RNG: &str = "chacha8";

/// Relative weights of the interaction patterns a random circuit may draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PatternMix {
    pub uniform: f64,
    pub clustered: f64,
    pub sliding_window: f64,
    pub power_law: f64,
}

impl Default for PatternMix {
    /// Leans toward drifting interaction patterns: those give the deep,
    /// temporally structured programs this workload targets, while keeping
    /// all four pattern families represented.
    fn default() -> Self {
        PatternMix { uniform: 0.75, clustered: 0.5, sliding_window: 1.75, power_law: 1.0 }
    }
}

impl PatternMix {
    fn weights(&self) -> [f64; 4] {
        [self.uniform, self.clustered, self.sliding_window, self.power_law]
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.weights();
        if w.iter().any(|x| *x < 0.0 || !x.is_finite()) || w.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Suite("pattern weights must be >= 0 with positive sum".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PatternParams {
    /// Qubit groups for the clustered pattern.
    pub clusters: u32,
    /// Probability that a clustered gate stays inside its group.
    pub cluster_bias: f64,
    /// Half-width of the sliding interaction window.
    pub window_halfwidth: u32,
    /// Zipf exponent for the power-law pattern.
    pub zipf_exponent: f64,
}

impl Default for PatternParams {
    fn default() -> Self {
        PatternParams { clusters: 4, cluster_bias: 0.85, window_halfwidth: 6, zipf_exponent: 1.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomSpec {
    pub seed: u64,
    /// Inclusive qubit count range.
    pub qubit_range: (u32, u32),
    /// Inclusive 2-qubit gate count range.
    pub gate_range: (u32, u32),
    pub pattern_mix: PatternMix,
    pub pattern_params: PatternParams,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            seed: 0,
            qubit_range: (60, 75),
            gate_range: (900, 2000),
            pattern_mix: PatternMix::default(),
            pattern_params: PatternParams::default(),
        }
    }
}

impl RandomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.qubit_range.0 < 2 || self.qubit_range.0 > self.qubit_range.1 {
            return Err(Error::Suite(format!("empty qubit range {:?}", self.qubit_range)));
        }
        if self.gate_range.0 > self.gate_range.1 {
            return Err(Error::Suite(format!("empty gate range {:?}", self.gate_range)));
        }
        self.pattern_mix.validate()
    }
}

fn distinct_pair(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> (Qubit, Qubit) {
    debug_assert!(hi > lo);
    let a = rng.random_range(lo..=hi);
    loop {
        let b = rng.random_range(lo..=hi);
        if b != a {
            return (a, b);
        }
    }
}

/// Contiguous group boundaries: `q` qubits split into `k` groups, earlier
/// groups absorbing the remainder.
fn cluster_bounds(q: u32, k: u32) -> Vec<(u32, u32)> {
    let base = q / k;
    let extra = q % k;
    let mut bounds = Vec::with_capacity(k as usize);
    let mut start = 0;
    for g in 0..k {
        let size = base + u32::from(g < extra);
        bounds.push((start, start + size));
        start += size;
    }
    bounds
}

pub fn gen_random(spec: &RandomSpec, name: &str) -> Result<Circuit> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let q = rng.random_range(spec.qubit_range.0..=spec.qubit_range.1);
    let g = rng.random_range(spec.gate_range.0..=spec.gate_range.1);

    let pattern = WeightedIndex::new(spec.pattern_mix.weights())
        .expect("validated weights")
        .sample(&mut rng);
    let p = &spec.pattern_params;

    let mut pairs = Vec::with_capacity(g as usize);
    match pattern {
        // uniform-pair
        0 => {
            for _ in 0..g {
                pairs.push(distinct_pair(&mut rng, 0, q - 1));
            }
        }
        // clustered: intra-group with probability cluster_bias
        1 => {
            let k = p.clusters.clamp(1, q / 2);
            let bounds = cluster_bounds(q, k);
            for _ in 0..g {
                if rng.random::<f64>() < p.cluster_bias {
                    let (lo, hi) = bounds[rng.random_range(0..k) as usize];
                    pairs.push(distinct_pair(&mut rng, lo, hi - 1));
                } else {
                    let ga = rng.random_range(0..k);
                    let gb = loop {
                        let x = rng.random_range(0..k);
                        if x != ga {
                            break x;
                        }
                    };
                    let (alo, ahi) = bounds[ga as usize];
                    let (blo, bhi) = bounds[gb as usize];
                    pairs.push((rng.random_range(alo..ahi), rng.random_range(blo..bhi)));
                }
            }
        }
        // sliding-window: pairs near an index drifting across the register
        2 => {
            let half = p.window_halfwidth.max(1);
            for t in 0..g {
                let span = q.saturating_sub(2 * half + 1);
                let center = if g > 1 {
                    half + (span as u64 * t as u64 / (g as u64 - 1)) as u32
                } else {
                    half
                };
                let lo = center.saturating_sub(half);
                let hi = (center + half).min(q - 1);
                pairs.push(distinct_pair(&mut rng, lo, hi));
            }
        }
        // power-law: Zipf-weighted qubit popularity over a shuffled ranking
        _ => {
            let mut perm: Vec<u32> = (0..q).collect();
            for i in (1..perm.len()).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let weights: Vec<f64> =
                (0..q).map(|r| 1.0 / ((r + 1) as f64).powf(p.zipf_exponent)).collect();
            let dist = WeightedIndex::new(&weights).expect("positive weights");
            for _ in 0..g {
                let a = perm[dist.sample(&mut rng)];
                let b = loop {
                    let x = perm[dist.sample(&mut rng)];
                    if x != a {
                        break x;
                    }
                };
                pairs.push((a, b));
            }
        }
    }

    Ok(Circuit::new(name, q, pairs.into_iter().map(|(a, b)| Gate::ms(a, b)).collect()))
}

/// All-pairs interaction pattern of a quantum Fourier transform:
/// `gates_per_pair` gates on every pair, so the program is symmetric.
pub fn gen_qft(q: u32, gates_per_pair: u32) -> Result<Circuit> {
    if q < 2 || gates_per_pair < 1 {
        return Err(Error::Suite(format!("invalid qft parameters q={q}, gates_per_pair={gates_per_pair}")));
    }
    let mut gates = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            for _ in 0..gates_per_pair {
                gates.push(Gate::ms(i, j));
            }
        }
    }
    Ok(Circuit::new(format!("qft_{q}"), q, gates))
}

/// QAOA interaction pattern: one random problem graph whose edge list is
/// replayed identically in every layer, so every edge occurs `layers`
/// times and the program is symmetric.
pub fn gen_qaoa(q: u32, layers: u32, edge_density: f64, seed: u64) -> Result<Circuit> {
    if q < 2 || layers < 1 || !(0.0..=1.0).contains(&edge_density) {
        return Err(Error::Suite(format!(
            "invalid qaoa parameters q={q}, layers={layers}, density={edge_density}"
        )));
    }
    let mut all_pairs = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            all_pairs.push((i, j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..all_pairs.len()).rev() {
        let j = rng.random_range(0..=i);
        all_pairs.swap(i, j);
    }
    let count = ((all_pairs.len() as f64 * edge_density).round() as usize).clamp(1, all_pairs.len());
    let edges = &all_pairs[..count];

    let mut gates = Vec::with_capacity(count * layers as usize);
    for _ in 0..layers {
        for &(a, b) in edges {
            gates.push(Gate::ms(a, b));
        }
    }
    Ok(Circuit::new(format!("qaoa_{q}"), q, gates))
}

/// Supremacy-style pattern: qubits on a near-square grid, layers cycling
/// four nearest-neighbor coupler patterns with random dropouts, which makes
/// the occurrence counts uneven (asymmetric) in general.
pub fn gen_supremacy_like(q: u32, depth: u32, seed: u64) -> Result<Circuit> {
    if q < 4 || depth < 1 {
        return Err(Error::Suite(format!("invalid supremacy parameters q={q}, depth={depth}")));
    }
    let cols = (q as f64).sqrt().ceil() as u32;
    let rows = q.div_ceil(cols);
    let at = |r: u32, c: u32| -> Option<u32> {
        let idx = r * cols + c;
        (r < rows && c < cols && idx < q).then_some(idx)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for layer in 0..depth {
        // alternate horizontal/vertical couplers with even/odd offsets
        let (vertical, offset) = match layer % 4 {
            0 => (false, 0),
            1 => (true, 0),
            2 => (false, 1),
            _ => (true, 1),
        };
        for r in 0..rows {
            for c in 0..cols {
                let pair = if vertical {
                    (r % 2 == offset).then(|| at(r, c).zip(at(r + 1, c))).flatten()
                } else {
                    (c % 2 == offset).then(|| at(r, c).zip(at(r, c + 1))).flatten()
                };
                if let Some((a, b)) = pair {
                    if rng.random::<f64>() < 0.85 {
                        gates.push(Gate::ms(a, b));
                    }
                }
            }
        }
    }
    Ok(Circuit::new(format!("supremacy_like_{q}"), q, gates))
}

/// Arithmetic-style pattern: ripple chains over a data register with
/// work-register interactions and early-qubit revisits, heavily uneven by
/// construction (asymmetric).
pub fn gen_sqrt_like(q: u32, gates: u32, seed: u64) -> Result<Circuit> {
    if q < 4 || gates < 1 {
        return Err(Error::Suite(format!("invalid sqrt parameters q={q}, gates={gates}")));
    }
    let data = q / 2;
    let work = q - data;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(gates as usize);
    let mut p: u32 = 0;
    while out.len() < gates as usize {
        let roll = rng.random::<f64>();
        let (a, b) = if roll < 0.55 {
            // carry chain sweep over the data register
            let pair = (p, (p + 1) % data);
            p = (p + 1) % (data - 1).max(1);
            pair
        } else if roll < 0.85 {
            // data <-> work interaction
            let d = rng.random_range(0..data);
            (d, data + d % work)
        } else {
            // revisit the low qubits
            let lo = rng.random_range(0..(data / 4).max(2));
            (lo, lo + 1)
        };
        if a != b {
            out.push(Gate::ms(a, b));
        }
    }
    Ok(Circuit::new(format!("sqrt_like_{q}"), q, out))
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Self-describing generator invocation; regenerating from it is
/// byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Random(RandomSpec),
    Qft { qubits: u32, gates_per_pair: u32 },
    Qaoa { qubits: u32, layers: u32, edge_density: f64, seed: u64 },
    SupremacyLike { qubits: u32, depth: u32, seed: u64 },
    SqrtLike { qubits: u32, gates: u32, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self, name: &str) -> Result<Circuit> {
        let mut circuit = match self {
            GeneratorSpec::Random(spec) => gen_random(spec, name)?,
            GeneratorSpec::Qft { qubits, gates_per_pair } => gen_qft(*qubits, *gates_per_pair)?,
            GeneratorSpec::Qaoa { qubits, layers, edge_density, seed } => {
                gen_qaoa(*qubits, *layers, *edge_density, *seed)?
            }
            GeneratorSpec::SupremacyLike { qubits, depth, seed } => {
                gen_supremacy_like(*qubits, *depth, *seed)?
            }
            GeneratorSpec::SqrtLike { qubits, gates, seed } => gen_sqrt_like(*qubits, *gates, *seed)?,
        };
        circuit.name = name.to_string();
        Ok(circuit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: GeneratorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub suite: String,
    /// PRNG algorithm identity; circuits only regenerate faithfully with
    /// the same stream.
    pub rng: String,
    pub root_seed: u64,
    pub circuits: Vec<ManifestEntry>,
}

impl SuiteManifest {
    pub fn validate(&self) -> Result<()> {
        if self.rng != MANIFEST_RNG {
            return Err(Error::Suite(format!("unsupported rng '{}'", self.rng)));
        }
        let mut names: Vec<&str> = self.circuits.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.circuits.len() {
            return Err(Error::Suite("duplicate circuit names in manifest".into()));
        }
        Ok(())
    }

    pub fn generate_all(&self) -> Result<Vec<Circuit>> {
        self.validate()?;
        self.circuits.iter().map(|e| e.spec.generate(&e.name)).collect()
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The random evaluation suite: `count` circuits drawn from the default
/// qubit/gate ranges with the default pattern mix.
pub fn random_suite(count: u32, root_seed: u64) -> SuiteManifest {
    let circuits = (0..count)
        .map(|i| {
            let spec = RandomSpec { seed: splitmix64(root_seed.wrapping_add(i as u64)), ..Default::default() };
            ManifestEntry {
                name: format!("rand_{i:03}"),
                spec: GeneratorSpec::Random(spec),
            }
        })
        .collect();
    SuiteManifest {
        suite: format!("random{count}"),
        rng: MANIFEST_RNG.to_string(),
        root_seed,
        circuits,
    }
}

/// Structural stand-ins for the four named benchmarks at their published
/// scale: SquareRoot (78q, 1028 gates), Supremacy (64q), QAOA (64q, 1260
/// gates), QFT (64q, 4032 gates via 2 gates per pair).
pub fn table1_suite(root_seed: u64) -> SuiteManifest {
    let circuits = vec![
        ManifestEntry {
            name: "sqrt_like_78".into(),
            spec: GeneratorSpec::SqrtLike { qubits: 78, gates: 1028, seed: splitmix64(root_seed) },
        },
        ManifestEntry {
            name: "supremacy_like_64".into(),
            spec: GeneratorSpec::SupremacyLike {
                qubits: 64,
                depth: 24,
                seed: splitmix64(root_seed.wrapping_add(1)),
            },
        },
        ManifestEntry {
            name: "qaoa_64".into(),
            spec: GeneratorSpec::Qaoa {
                qubits: 64,
                layers: 4,
                edge_density: 0.15625,
                seed: splitmix64(root_seed.wrapping_add(2)),
            },
        },
        ManifestEntry {
            name: "qft_64".into(),
            spec: GeneratorSpec::Qft { qubits: 64, gates_per_pair: 2 },
        },
    ];
    SuiteManifest {
        suite: "table1".into(),
        rng: MANIFEST_RNG.to_string(),
        root_seed,
        circuits,
    }
}

pub fn build_suite(kind: &str, root_seed: u64, count: Option<u32>) -> Result<SuiteManifest> {
    match kind {
        "random120" | "random" => Ok(random_suite(count.unwrap_or(120), root_seed)),
        "table1" => Ok(table1_suite(root_seed)),
        other => Err(Error::Suite(format!(
            "unknown suite '{other}' (available: random120, table1)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{circuit_stats, classify_symmetry};

    #[test]
    fn random_is_deterministic_and_in_range() {
        let spec = RandomSpec { seed: 42, ..Default::default() };
        let a = gen_random(&spec, "a").unwrap();
        let b = gen_random(&spec, "a").unwrap();
        assert_eq!(a, b);
        assert!((60..=75).contains(&a.num_qubits));
        assert!((900..=2000).contains(&a.two_qubit_gate_count()));
        a.validate().unwrap();
    }

    #[test]
    fn different_seeds_differ() {
        let a = gen_random(&RandomSpec { seed: 1, ..Default::default() }, "a").unwrap();
        let b = gen_random(&RandomSpec { seed: 2, ..Default::default() }, "b").unwrap();
        assert_ne!(a.pair_sequence(), b.pair_sequence());
    }

    #[test]
    fn clustered_pattern_biases_intra_group() {
        let spec = RandomSpec {
            seed: 7,
            pattern_mix: PatternMix { uniform: 0.0, clustered: 1.0, sliding_window: 0.0, power_law: 0.0 },
            ..Default::default()
        };
        let c = gen_random(&spec, "clustered").unwrap();
        let k = spec.pattern_params.clusters;
        let bounds = cluster_bounds(c.num_qubits, k);
        let group_of = |q: u32| bounds.iter().position(|&(lo, hi)| q >= lo && q < hi).unwrap();
        let intra = c
            .pair_sequence()
            .iter()
            .filter(|p| group_of(p.a()) == group_of(p.b()))
            .count();
        let frac = intra as f64 / c.two_qubit_gate_count() as f64;
        assert!(frac >= 0.70, "intra-group fraction {frac}");
    }

    #[test]
    fn qft_counts_and_symmetry() {
        let one = gen_qft(64, 1).unwrap();
        assert_eq!(one.two_qubit_gate_count(), 2016);
        assert!(classify_symmetry(&one));

        let two = gen_qft(64, 2).unwrap();
        assert_eq!(two.two_qubit_gate_count(), 4032);
        assert_eq!(circuit_stats(&two).s, 0);

        let tiny = gen_qft(2, 2).unwrap();
        assert_eq!(tiny.two_qubit_gate_count(), 2);
        assert_eq!(crate::analysis::build_dag(&tiny).depth(), 2);
    }

    #[test]
    fn qaoa_matches_published_scale() {
        let c = gen_qaoa(64, 4, 0.15625, 11).unwrap();
        assert_eq!(c.two_qubit_gate_count(), 1260);
        assert_eq!(circuit_stats(&c).s, 0);
    }

    #[test]
    fn supremacy_and_sqrt_are_asymmetric() {
        let s = gen_supremacy_like(64, 24, 3).unwrap();
        assert_eq!(s.num_qubits, 64);
        assert!(s.two_qubit_gate_count() > 400);
        assert_eq!(circuit_stats(&s).s, 1);
        s.validate().unwrap();

        let r = gen_sqrt_like(78, 1028, 5).unwrap();
        assert_eq!(r.two_qubit_gate_count(), 1028);
        assert_eq!(circuit_stats(&r).s, 1);
        r.validate().unwrap();
    }

    #[test]
    fn manifest_regeneration_is_byte_identical() {
        let manifest = random_suite(5, 99);
        let json = manifest.to_json_pretty();
        let parsed: SuiteManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, manifest);

        let first: Vec<String> =
            manifest.generate_all().unwrap().iter().map(|c| c.to_ms_text()).collect();
        let second: Vec<String> =
            parsed.generate_all().unwrap().iter().map(|c| c.to_ms_text()).collect();
        assert_eq!(first, second);
    }

    #[test]
    fn suite_names_are_unique_and_valid() {
        let manifest = random_suite(120, 1);
        manifest.validate().unwrap();
        assert_eq!(manifest.circuits.len(), 120);
        assert_eq!(manifest.suite, "random120");

        let t1 = table1_suite(1);
        t1.validate().unwrap();
        for circuit in t1.generate_all().unwrap() {
            circuit.validate().unwrap();
        }
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(build_suite("nope", 1, None), Err(Error::Suite(_))));
    }
}
