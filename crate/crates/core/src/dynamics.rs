//! Time integration, target detection, reinsertion and the imitation
//! decision rule.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Individualism, SimConfig};
use crate::error::Result;
use crate::forces::{ForceField, ForceParams};
use crate::geometry::{
    find_position, initialize, Agent, Group, Placement, PlacementZone, SimState, WorldGeometry,
    REINSERT_MIN_DISTANCE,
};
use crate::observables::{door_density, DensityProbe};
use crate::stats::SampledSeries;
use crate::vec2::Vec2;

/// Lateral clearance kept from the door edges when aiming for the opening.
pub const DOOR_EDGE_CLEARANCE: f64 = 0.1;

/// Unit vector an agent wants to walk along.
///
/// Before crossing the door line in its own sense the agent aims at the
/// nearest point of the opening (shrunk by its radius plus a clearance);
/// afterwards it heads straight for its target plane.
pub fn desired_direction(agent: &Agent, geometry: &WorldGeometry) -> Vec2 {
    let heading = agent.group.heading();
    let straight = Vec2::X * heading;
    if agent.position.x * heading >= 0.0 {
        return straight;
    }
    let half = 0.5 * geometry.door_width - agent.radius - DOOR_EDGE_CLEARANCE;
    let aim_y = if half > 0.0 {
        agent.position.y.clamp(-half, half)
    } else {
        0.0
    };
    (Vec2::new(0.0, aim_y) - agent.position)
        .normalized()
        .unwrap_or(straight)
}

/// `F(ξ) = 1 / (1 + exp(−(ξ − 0.5) / T))`; exactly `0.5` for `T = ∞`.
pub fn sigmoid_f(xi: f64, t: Individualism) -> f64 {
    match t {
        Individualism::Infinite => 0.5,
        Individualism::Finite(t) => 1.0 / (1.0 + (-(xi - 0.5) / t).exp()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Reinserted,
    StateFlip,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Reinserted => "reinserted",
            EventKind::StateFlip => "state_flip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub agent_id: usize,
    pub kind: EventKind,
}

/// Teleports every agent past its target plane back to a free spot on the
/// side opposite its current goal, at rest and with its decision flag reset.
pub fn check_reinsertion(
    state: &mut SimState,
    geometry: &WorldGeometry,
    events: &mut Vec<Event>,
) {
    for i in 0..state.agents.len() {
        if !geometry.reached_target(&state.agents[i]) {
            continue;
        }
        let (radius, side) = {
            let a = &state.agents[i];
            (a.radius, -a.group.heading())
        };
        let zone = PlacementZone::start_side(geometry, side, radius, REINSERT_MIN_DISTANCE);
        let position = match find_position(
            &mut state.rng,
            &zone,
            radius,
            &state.agents,
            Some(i),
            geometry,
        ) {
            Placement::Free(p) | Placement::Crowded(p) => p,
        };
        let a = &mut state.agents[i];
        a.position = position;
        a.velocity = Vec2::ZERO;
        a.decided_this_cycle = false;
        events.push(Event {
            time: state.time,
            agent_id: a.id,
            kind: EventKind::Reinserted,
        });
    }
}

/// Applies the imitation rule to every undecided agent inside the decision
/// area. The area composition is taken once, before any flip of this call.
pub fn decision_check(
    state: &mut SimState,
    individualism: Individualism,
    geometry: &WorldGeometry,
    events: &mut Vec<Event>,
) {
    let mut n_a = 0usize;
    let mut n_b = 0usize;
    for a in &state.agents {
        if geometry.in_decision_area(a.position) {
            match a.group {
                Group::A => n_a += 1,
                Group::B => n_b += 1,
            }
        }
    }
    let total = n_a + n_b;
    if total == 0 {
        return;
    }
    for i in 0..state.agents.len() {
        let a = &state.agents[i];
        if a.decided_this_cycle || !geometry.in_decision_area(a.position) {
            continue;
        }
        let same = match a.group {
            Group::A => n_a,
            Group::B => n_b,
        };
        let xi = same as f64 / total as f64;
        let chi: f64 = state.rng.random();
        let a = &mut state.agents[i];
        if sigmoid_f(xi, individualism) < chi {
            a.group = a.group.flipped();
            events.push(Event {
                time: state.time,
                agent_id: a.id,
                kind: EventKind::StateFlip,
            });
        }
        a.decided_this_cycle = true;
    }
}

/// A running simulation: state plus the reusable machinery to advance it.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: SimConfig,
    pub geometry: WorldGeometry,
    pub state: SimState,
    field: ForceField,
    steps: u64,
    events: Vec<Event>,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        let state = initialize(&config)?;
        Self::from_state(config, state)
    }

    pub fn from_state(config: SimConfig, state: SimState) -> Result<Self> {
        config.validate()?;
        let geometry = WorldGeometry::from_config(&config);
        let field = ForceField::new(ForceParams::from_config(&config), &geometry);
        Ok(Simulation {
            config,
            geometry,
            state,
            field,
            steps: 0,
            events: Vec::new(),
        })
    }

    /// One semi-implicit Euler step followed by reinsertion and decisions.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.config.dt;
        let forces = self
            .field
            .compute(&self.state.agents, &self.geometry, self.state.time)?;
        for (a, f) in self.state.agents.iter_mut().zip(forces) {
            a.velocity += f.total() * (dt / a.mass);
            a.position += a.velocity * dt;
        }
        self.steps += 1;
        self.state.time = self.steps as f64 * dt;
        check_reinsertion(&mut self.state, &self.geometry, &mut self.events);
        if let Some(t) = self.config.individualism {
            decision_check(&mut self.state, t, &self.geometry, &mut self.events);
        }
        Ok(())
    }

    pub fn advance(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    pub fn density(&self) -> Result<f64> {
        let probe = DensityProbe::door(self.config.door_width, self.config.kappa)?;
        door_density(&self.state.agents, &probe)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub times: Vec<f64>,
    pub density: SampledSeries,
    pub fraction: SampledSeries,
    pub events: Vec<Event>,
}

impl RunOutput {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `time_s,rho,frac_a`, one row per sample.
    pub fn write_samples_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time_s", "rho", "frac_a"])?;
        for ((t, rho), frac) in self
            .times
            .iter()
            .zip(&self.density.values)
            .zip(&self.fraction.values)
        {
            w.write_record([format_time(*t), rho.to_string(), frac.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `time_s,agent_id,event`, one row per event.
    pub fn write_events_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time_s", "agent_id", "event"])?;
        for e in &self.events {
            w.write_record([
                format_time(e.time),
                e.agent_id.to_string(),
                e.kind.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seconds with the accumulated floating-point noise of `steps · dt` removed.
fn format_time(t: f64) -> String {
    let s = format!("{t:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Initializes, discards `warmup` seconds, then samples `N_T` points of door
/// density and group-`A` fraction, one every `sample_interval`.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    run_with(config, |_| Ok(()))
}

/// Like [`run`], calling `inspect` on the simulation at every sample.
pub fn run_with<F>(config: &SimConfig, mut inspect: F) -> Result<RunOutput>
where
    F: FnMut(&Simulation) -> Result<()>,
{
    let mut sim = Simulation::new(config.clone())?;
    sim.advance(config.warmup_steps())?;
    let per_sample = config.steps_per_sample();
    let n = config.n_samples;
    let mut times = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    let mut frac = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            sim.advance(per_sample)?;
        }
        inspect(&sim)?;
        times.push(sim.state.time);
        rho.push(sim.density()?);
        frac.push(sim.state.fraction_a());
    }
    Ok(RunOutput {
        times,
        density: SampledSeries::new_unchecked(rho, "rho"),
        fraction: SampledSeries::new_unchecked(frac, "frac_a"),
        events: sim.take_events(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn agent(id: usize, x: f64, y: f64, group: Group) -> Agent {
        Agent {
            id,
            position: Vec2::new(x, y),
            velocity: Vec2::ZERO,
            radius: 0.25,
            mass: 80.0,
            desired_speed: 1.2,
            group,
            decided_this_cycle: false,
        }
    }

    fn state_of(agents: Vec<Agent>, seed: u64) -> SimState {
        SimState {
            time: 0.0,
            agents,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    #[test]
    fn direction_through_door_centre() {
        let g = WorldGeometry::new(7.0);
        let d = desired_direction(&agent(0, -5.0, 0.0, Group::A), &g);
        assert_eq!(d, Vec2::X);
    }

    #[test]
    fn direction_clamped_to_opening() {
        let g = WorldGeometry::new(7.0);
        let d = desired_direction(&agent(0, -5.0, 8.0, Group::A), &g);
        let expected = Vec2::new(5.0, 3.15 - 8.0).normalized().unwrap();
        assert!((d - expected).norm() < 1e-12);
    }

    #[test]
    fn direction_after_crossing() {
        let g = WorldGeometry::new(7.0);
        assert_eq!(desired_direction(&agent(0, 3.0, 2.0, Group::A), &g), Vec2::X);
        assert_eq!(desired_direction(&agent(0, -3.0, 2.0, Group::B), &g), -Vec2::X);
        let d = desired_direction(&agent(0, 4.0, -6.0, Group::B), &g);
        assert!(d.x < 0.0 && d.y > 0.0);
    }

    #[test]
    fn sigmoid_values() {
        for t in [0.01, 0.078, 1.0, 50.0] {
            assert_eq!(sigmoid_f(0.5, Individualism::Finite(t)), 0.5);
        }
        // 1 / (1 + exp(-0.1 / 0.078)) = 0.782799
        let f = sigmoid_f(0.6, Individualism::Finite(0.078));
        assert!((f - 0.7828).abs() < 1e-4, "{f}");
        assert_eq!(sigmoid_f(0.8, Individualism::Finite(1e-6)), 1.0);
        assert_eq!(sigmoid_f(0.2, Individualism::Finite(1e-6)), 0.0);
        assert_eq!(sigmoid_f(0.9, Individualism::Infinite), 0.5);
    }

    #[test]
    fn reinsertion_of_agent_past_target() {
        let g = WorldGeometry::new(7.0);
        let mut a = agent(0, 10.01, 1.0, Group::A);
        a.velocity = Vec2::new(1.2, 0.0);
        a.decided_this_cycle = true;
        let mut s = state_of(vec![a, agent(1, -10.2, 0.0, Group::B), agent(2, 9.99, 0.0, Group::A)], 4);
        let mut events = Vec::new();
        check_reinsertion(&mut s, &g, &mut events);
        let a = &s.agents[0];
        assert!((-10.0..=-0.5).contains(&a.position.x), "{:?}", a.position);
        assert_eq!(a.velocity, Vec2::ZERO);
        assert!(!a.decided_this_cycle);
        let b = &s.agents[1];
        assert!((0.5..=10.0).contains(&b.position.x));
        assert_eq!(s.agents[2].position, Vec2::new(9.99, 0.0));
        assert_eq!(events.len(), 2);
        assert!(events.iter().all(|e| e.kind == EventKind::Reinserted));
    }

    #[test]
    fn lone_decider_rarely_flips_at_low_t() {
        let g = WorldGeometry::new(7.0);
        let mut flips = 0;
        for seed in 0..2000 {
            let mut s = state_of(vec![agent(0, 0.1, 0.0, Group::A)], seed);
            let mut ev = Vec::new();
            decision_check(&mut s, Individualism::Finite(0.05), &g, &mut ev);
            assert!(s.agents[0].decided_this_cycle);
            flips += ev.len();
        }
        // flip probability 1 - F(1) = 4.5e-5
        assert!(flips <= 2, "{flips}");
    }

    #[test]
    fn infinite_t_flips_half_the_time() {
        let g = WorldGeometry::new(7.0);
        let n = 20_000;
        let mut flips = 0;
        for seed in 0..n {
            let mut s = state_of(vec![agent(0, 0.1, 0.0, Group::A), agent(1, -0.2, 1.0, Group::B)], seed);
            s.agents[1].decided_this_cycle = true;
            let mut ev = Vec::new();
            decision_check(&mut s, Individualism::Infinite, &g, &mut ev);
            flips += ev.len();
        }
        let p = flips as f64 / n as f64;
        assert!((p - 0.5).abs() < 0.015, "{p}");
    }

    #[test]
    fn minority_joins_majority_at_low_t() {
        let g = WorldGeometry::new(7.0);
        // ξ = 3 / 10 for each of the three A agents
        let mut agents: Vec<Agent> = (0..3).map(|i| agent(i, 0.1, i as f64 - 1.0, Group::A)).collect();
        agents.extend((3..10).map(|i| {
            let mut a = agent(i, -0.1, i as f64 * 0.3 - 2.0, Group::B);
            a.decided_this_cycle = true;
            a
        }));
        let mut s = state_of(agents, 9);
        let mut ev = Vec::new();
        decision_check(&mut s, Individualism::Finite(0.01), &g, &mut ev);
        assert_eq!(ev.len(), 3);
        assert_eq!(s.count(Group::B), 10);
    }

    #[test]
    fn outside_area_never_decides() {
        let g = WorldGeometry::new(7.0);
        let mut s = state_of(vec![agent(0, 0.6, 0.0, Group::A), agent(1, 0.0, 3.6, Group::A)], 1);
        let mut ev = Vec::new();
        decision_check(&mut s, Individualism::Infinite, &g, &mut ev);
        assert!(ev.is_empty());
        assert!(s.agents.iter().all(|a| !a.decided_this_cycle));
    }

    #[test]
    fn decided_agent_is_skipped() {
        let g = WorldGeometry::new(7.0);
        let mut a = agent(0, 0.0, 0.0, Group::A);
        a.decided_this_cycle = true;
        let mut s = state_of(vec![a], 1);
        let before = s.rng.clone();
        let mut ev = Vec::new();
        decision_check(&mut s, Individualism::Infinite, &g, &mut ev);
        assert!(ev.is_empty());
        // no random number consumed
        assert_eq!(s.rng.random::<u64>(), before.clone().random::<u64>());
    }

    fn two_agent_config() -> SimConfig {
        SimConfig {
            n_agents: 2,
            kappa: 1,
            ..SimConfig::default()
        }
    }

    #[test]
    fn single_step_relaxation_from_rest() {
        let a = agent(0, -5.0, 0.0, Group::A);
        let b = agent(1, 5.0, 5.0, Group::B);
        let mut sim = Simulation::from_state(two_agent_config(), state_of(vec![a, b], 0)).unwrap();
        sim.step().unwrap();
        let v = sim.state.agents[0].velocity;
        let expected = 1.2 / 0.5 * 1e-3;
        assert!((v.x - expected).abs() < 1e-12 && v.y.abs() < 1e-15);
        assert!((sim.state.agents[0].position.x - (-5.0 + expected * 1e-3)).abs() < 1e-15);
        assert!((sim.state.time - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn ballistic_motion_without_forces() {
        let mut a = agent(0, -5.0, 0.0, Group::A);
        a.velocity = Vec2::new(1.0, 0.0);
        // current velocity equals desired velocity, so the driving force vanishes
        a.desired_speed = 1.0;
        let mut sim = Simulation::from_state(two_agent_config(), state_of(vec![a], 0)).unwrap();
        sim.step().unwrap();
        assert_eq!(sim.state.agents[0].velocity, Vec2::new(1.0, 0.0));
        assert!((sim.state.agents[0].position.x - (-5.0 + 1e-3)).abs() < 1e-15);
    }
}
