use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stechkin_core::smoothness::{steklov, SteklovOrder};
use stechkin_core::{PeriodicFunction, TrigPoly};

use crate::config::CorpusKind;

/// A corpus member with a stable identifier.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub kind: CorpusKind,
    pub f: PeriodicFunction,
}

pub const SMOOTHED_STEP_EPS: [f64; 2] = [1e-2, 1e-3];
const NOISE_NODES: usize = 64;

fn random_trig(rng: &mut ChaCha8Rng, degree: usize) -> TrigPoly {
    let a: Vec<f64> = (0..=degree).map(|j| rng.gen_range(-1.0..1.0) / (1.0 + j as f64)).collect();
    let b: Vec<f64> = (1..=degree).map(|j| rng.gen_range(-1.0..1.0) / (1.0 + j as f64)).collect();
    TrigPoly::new(a, b).expect("matching lengths")
}

/// Noise on 64 nodes smoothed by one hat-kernel Steklov pass.
pub fn sampled_noise(seed: u64) -> PeriodicFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_0000);
    let values: Vec<f64> = (0..NOISE_NODES).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = PeriodicFunction::sampled(values).expect("even node count");
    let h = std::f64::consts::TAU / NOISE_NODES as f64;
    steklov(&raw, h, SteklovOrder::Two, 1).expect("valid step")
}

/// Default corpus for approximation degree `n − 1`.
pub fn build(kinds: &[CorpusKind], n: usize, seed: u64, random_polys: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for &kind in kinds {
        match kind {
            CorpusKind::CosN => out.push(CorpusEntry {
                id: format!("cos-n{n}"),
                kind,
                f: PeriodicFunction::CosN(n as u32),
            }),
            CorpusKind::Step => out.push(CorpusEntry { id: "step".into(), kind, f: PeriodicFunction::Step }),
            CorpusKind::SmoothedStep => {
                for eps in SMOOTHED_STEP_EPS {
                    out.push(CorpusEntry {
                        id: format!("smoothed-step-{eps:e}"),
                        kind,
                        f: PeriodicFunction::smoothed_step(eps).expect("eps in range"),
                    });
                }
            }
            CorpusKind::FavardSign => out.push(CorpusEntry {
                id: format!("favard-sign-n{n}"),
                kind,
                f: PeriodicFunction::FavardSign(n as u32),
            }),
            CorpusKind::RandomTrig => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
                for i in 0..random_polys {
                    out.push(CorpusEntry {
                        id: format!("random-trig-{i:02}-deg{}", 2 * n),
                        kind,
                        f: PeriodicFunction::Trig(random_trig(&mut rng, 2 * n)),
                    });
                }
            }
            CorpusKind::SampledNoise => out.push(CorpusEntry {
                id: "sampled-noise".into(),
                kind,
                f: sampled_noise(seed),
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let a = build(&CorpusKind::ALL, 8, 3, 10);
        let b = build(&CorpusKind::ALL, 8, 3, 10);
        assert_eq!(a.len(), 1 + 1 + 2 + 1 + 10 + 1);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.f, y.f);
        }
        let c = build(&[CorpusKind::RandomTrig], 8, 4, 1);
        assert_ne!(c[0].f, a[5].f);
    }
}
