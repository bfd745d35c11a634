//! Saturation episodes and regime labels from the group-`A` fraction series.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::Group;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// Fraction strictly above this counts as saturated in group `A`.
    pub high: f64,
    /// Fraction strictly below this counts as saturated in group `B`.
    pub low: f64,
    /// Minimum consecutive saturated samples for an episode.
    pub min_samples: usize,
    /// Share of the series a terminal episode must cover for `Saturated`.
    pub tail_coverage: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            high: 0.95,
            low: 0.05,
            min_samples: 50,
            tail_coverage: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Saturated,
    Transition,
    NonSaturated,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Saturated => "saturated",
            Regime::Transition => "transition",
            Regime::NonSaturated => "non_saturated",
        })
    }
}

/// Half-open sample range `[start, end)` during which one group dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Episode {
    pub start: usize,
    pub end: usize,
    pub dominant: Group,
}

impl Episode {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub saturation_episodes: Vec<Episode>,
}

impl RegimeClassification {
    /// Per-sample mask, `true` inside an episode.
    pub fn mask(&self, len: usize) -> Vec<bool> {
        let mut m = vec![false; len];
        for e in &self.saturation_episodes {
            m[e.start..e.end.min(len)].iter_mut().for_each(|v| *v = true);
        }
        m
    }

    pub fn longest_episode(&self) -> Option<Episode> {
        self.saturation_episodes.iter().copied().max_by_key(Episode::len)
    }
}

fn saturated_side(fraction: f64, t: &RegimeThresholds) -> Option<Group> {
    if fraction > t.high {
        Some(Group::A)
    } else if fraction < t.low {
        Some(Group::B)
    } else {
        None
    }
}

pub fn classify_regime(fraction: &[f64], thresholds: &RegimeThresholds) -> RegimeClassification {
    let mut episodes = Vec::new();
    let mut i = 0;
    while i < fraction.len() {
        let Some(side) = saturated_side(fraction[i], thresholds) else {
            i += 1;
            continue;
        };
        let start = i;
        while i < fraction.len() && saturated_side(fraction[i], thresholds) == Some(side) {
            i += 1;
        }
        if i - start >= thresholds.min_samples {
            episodes.push(Episode {
                start,
                end: i,
                dominant: side,
            });
        }
    }
    let regime = match episodes.last() {
        None => Regime::NonSaturated,
        Some(last)
            if last.end == fraction.len()
                && last.len() as f64 >= thresholds.tail_coverage * fraction.len() as f64 =>
        {
            Regime::Saturated
        }
        Some(_) => Regime::Transition,
    };
    RegimeClassification {
        regime,
        saturation_episodes: episodes,
    }
}

/// Mean of `values` inside and outside the episodes; `None` for an empty side.
pub fn split_means(values: &[f64], classification: &RegimeClassification) -> (Option<f64>, Option<f64>) {
    let mask = classification.mask(values.len());
    let (mut si, mut ni, mut so, mut no) = (0.0, 0usize, 0.0, 0usize);
    for (v, inside) in values.iter().zip(mask) {
        if inside {
            si += v;
            ni += 1;
        } else {
            so += v;
            no += 1;
        }
    }
    let avg = |s: f64, n: usize| (n > 0).then(|| s / n as f64);
    (avg(si, ni), avg(so, no))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RegimeThresholds {
        RegimeThresholds::default()
    }

    #[test]
    fn balanced_is_non_saturated() {
        let c = classify_regime(&[0.5; 1000], &t());
        assert_eq!(c.regime, Regime::NonSaturated);
        assert!(c.saturation_episodes.is_empty());
    }

    #[test]
    fn ramp_to_full_and_stay() {
        let f: Vec<f64> = (0..1000)
            .map(|i| if i < 200 { 0.5 + 0.5 * i as f64 / 200.0 } else { 1.0 })
            .collect();
        let c = classify_regime(&f, &t());
        assert_eq!(c.regime, Regime::Saturated);
        assert_eq!(c.saturation_episodes.len(), 1);
        assert_eq!(c.saturation_episodes[0].end, 1000);
        assert_eq!(c.saturation_episodes[0].dominant, Group::A);
    }

    #[test]
    fn alternating_stretches() {
        let mut f = Vec::new();
        for block in 0..6 {
            let v = match block % 3 {
                0 => 0.5,
                1 => 1.0,
                _ => 0.0,
            };
            f.extend(std::iter::repeat_n(v, 150));
        }
        let c = classify_regime(&f, &t());
        assert_eq!(c.regime, Regime::Transition);
        assert_eq!(c.saturation_episodes.len(), 4);
        assert!(c.saturation_episodes.windows(2).all(|w| w[0].end <= w[1].start));
    }

    #[test]
    fn short_bursts_are_ignored() {
        let mut f = vec![0.5; 500];
        f[100..149].iter_mut().for_each(|v| *v = 1.0);
        let c = classify_regime(&f, &t());
        assert_eq!(c.regime, Regime::NonSaturated);
    }

    #[test]
    fn terminal_but_short_episode_is_transition() {
        let mut f = vec![0.5; 1000];
        f[700..].iter_mut().for_each(|v| *v = 0.0);
        let c = classify_regime(&f, &t());
        assert_eq!(c.regime, Regime::Transition);
        assert_eq!(c.saturation_episodes[0].dominant, Group::B);
    }

    #[test]
    fn thresholds_are_strict() {
        // 57 / 60 = 0.95 exactly is not saturated
        let c = classify_regime(&[0.95; 200], &t());
        assert!(c.saturation_episodes.is_empty());
    }

    #[test]
    fn means_inside_and_outside() {
        let mut f = vec![0.5; 200];
        f[100..].iter_mut().for_each(|v| *v = 1.0);
        let c = classify_regime(&f, &t());
        let rho: Vec<f64> = (0..200).map(|i| if i < 100 { 2.0 } else { 0.5 }).collect();
        assert_eq!(split_means(&rho, &c), (Some(0.5), Some(2.0)));
    }
}
