//! World layout, agents, and initial placement.
//!
//! Frame: the door wall lies on `x = 0` with the opening centred on `y = 0`.
//! Group `A` walks toward `+x`, group `B` toward `-x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::vec2::Vec2;

pub const CORRIDOR_WIDTH: f64 = 20.0;
pub const CORRIDOR_HALF_LENGTH: f64 = 15.0;
/// Distance from the door to each target plane.
pub const TARGET_DISTANCE: f64 = 10.0;
/// The decision area extends this far on each side of the door.
pub const DECISION_HALF_DEPTH: f64 = 0.5;
/// Reinserted agents keep at least this distance from the door line.
pub const REINSERT_MIN_DISTANCE: f64 = 0.5;
/// Clearance kept between a reinserted disc and the side walls.
pub const WALL_MARGIN: f64 = 0.1;
pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

pub const MASS_RANGE: (f64, f64) = (70.0, 90.0);
pub const DIAMETER_RANGE: (f64, f64) = (0.44, 0.56);
pub const DESIRED_SPEED_RANGE: (f64, f64) = (1.05, 1.35);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    /// Walks toward `+x`.
    A,
    /// Walks toward `-x`.
    B,
}

impl Group {
    /// Sign of the desired travel direction along `x`.
    #[inline]
    pub fn heading(self) -> f64 {
        match self {
            Group::A => 1.0,
            Group::B => -1.0,
        }
    }

    #[inline]
    pub fn flipped(self) -> Group {
        match self {
            Group::A => Group::B,
            Group::B => Group::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: usize,
    pub position: Vec2,
    pub velocity: Vec2,
    pub radius: f64,
    pub mass: f64,
    pub desired_speed: f64,
    pub group: Group,
    pub decided_this_cycle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyParams {
    pub mass: f64,
    pub radius: f64,
    pub desired_speed: f64,
}

/// Draws mass, diameter and desired speed, each uniform and independent.
pub fn draw_body_params<R: Rng + ?Sized>(rng: &mut R) -> BodyParams {
    let mass = rng.random_range(MASS_RANGE.0..=MASS_RANGE.1);
    let diameter = rng.random_range(DIAMETER_RANGE.0..=DIAMETER_RANGE.1);
    let desired_speed = rng.random_range(DESIRED_SPEED_RANGE.0..=DESIRED_SPEED_RANGE.1);
    BodyParams {
        mass,
        radius: 0.5 * diameter,
        desired_speed,
    }
}

/// A zero-thickness wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSegment {
    pub start: Vec2,
    pub end: Vec2,
}

impl WallSegment {
    pub fn new(start: Vec2, end: Vec2) -> Self {
        WallSegment { start, end }
    }

    pub fn closest_point(&self, p: Vec2) -> Vec2 {
        let seg = self.end - self.start;
        let len_sq = seg.norm_sq();
        if len_sq == 0.0 {
            return self.start;
        }
        let t = ((p - self.start).dot(seg) / len_sq).clamp(0.0, 1.0);
        self.start + seg * t
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        (p - self.closest_point(p)).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldGeometry {
    pub half_length: f64,
    pub width: f64,
    pub door_width: f64,
    walls: Vec<WallSegment>,
}

impl WorldGeometry {
    pub fn new(door_width: f64) -> Self {
        let half_w = 0.5 * CORRIDOR_WIDTH;
        let half_l = 0.5 * door_width;
        let x = CORRIDOR_HALF_LENGTH;
        let walls = vec![
            // door wall, lower and upper leaf
            WallSegment::new(Vec2::new(0.0, -half_w), Vec2::new(0.0, -half_l)),
            WallSegment::new(Vec2::new(0.0, half_l), Vec2::new(0.0, half_w)),
            // side walls
            WallSegment::new(Vec2::new(-x, -half_w), Vec2::new(x, -half_w)),
            WallSegment::new(Vec2::new(-x, half_w), Vec2::new(x, half_w)),
        ];
        WorldGeometry {
            half_length: CORRIDOR_HALF_LENGTH,
            width: CORRIDOR_WIDTH,
            door_width,
            walls,
        }
    }

    pub fn from_config(config: &SimConfig) -> Self {
        Self::new(config.door_width)
    }

    pub fn walls(&self) -> &[WallSegment] {
        &self.walls
    }

    pub fn door_wall(&self) -> &[WallSegment] {
        &self.walls[..2]
    }

    pub fn side_walls(&self) -> &[WallSegment] {
        &self.walls[2..]
    }

    /// `L × 1 m` rectangle straddling the door.
    pub fn in_decision_area(&self, p: Vec2) -> bool {
        p.x.abs() <= DECISION_HALF_DEPTH && p.y.abs() <= 0.5 * self.door_width
    }

    /// Target plane `x` coordinate for a group.
    pub fn target_x(&self, group: Group) -> f64 {
        group.heading() * TARGET_DISTANCE
    }

    pub fn reached_target(&self, agent: &Agent) -> bool {
        match agent.group {
            Group::A => agent.position.x >= TARGET_DISTANCE,
            Group::B => agent.position.x <= -TARGET_DISTANCE,
        }
    }

    /// Edge-to-wall distance of a disc, minimum over all walls.
    pub fn wall_clearance(&self, p: Vec2, radius: f64) -> f64 {
        self.walls
            .iter()
            .map(|w| w.distance(p) - radius)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn inside_corridor(&self, p: Vec2, tolerance: f64) -> bool {
        p.x.abs() <= self.half_length + tolerance && p.y.abs() <= 0.5 * self.width + tolerance
    }
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub time: f64,
    pub agents: Vec<Agent>,
    pub rng: ChaCha8Rng,
}

impl SimState {
    pub fn count(&self, group: Group) -> usize {
        self.agents.iter().filter(|a| a.group == group).count()
    }

    pub fn fraction_a(&self) -> f64 {
        self.count(Group::A) as f64 / self.agents.len() as f64
    }
}

/// Candidate region for placing a disc on one side of the door.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlacementZone {
    /// `-1` for `x < 0`, `+1` for `x > 0`.
    pub side: f64,
    pub min_abs_x: f64,
    pub max_abs_x: f64,
    pub half_height: f64,
}

impl PlacementZone {
    pub fn start_side(geometry: &WorldGeometry, side: f64, radius: f64, min_abs_x: f64) -> Self {
        PlacementZone {
            side,
            min_abs_x,
            max_abs_x: TARGET_DISTANCE,
            half_height: 0.5 * geometry.width - radius - WALL_MARGIN,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec2 {
        // (min, max] so the door line itself is never chosen
        let u: f64 = rng.random();
        let abs_x = self.max_abs_x - u * (self.max_abs_x - self.min_abs_x);
        let y = rng.random_range(-self.half_height..=self.half_height);
        Vec2::new(self.side * abs_x, y)
    }
}

/// Largest disc overlap (positive) between a candidate and the placed agents,
/// including wall overlap. Non-positive means the spot is free.
fn worst_overlap(
    p: Vec2,
    radius: f64,
    others: &[Agent],
    skip: Option<usize>,
    geometry: &WorldGeometry,
) -> f64 {
    let mut worst = -geometry.wall_clearance(p, radius);
    for (k, o) in others.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        let overlap = radius + o.radius - (p - o.position).norm();
        if overlap > worst {
            worst = overlap;
        }
    }
    worst
}

pub(crate) enum Placement {
    Free(Vec2),
    /// No free spot found; carries the least-overlapping candidate.
    Crowded(Vec2),
}

pub(crate) fn find_position<R: Rng + ?Sized>(
    rng: &mut R,
    zone: &PlacementZone,
    radius: f64,
    others: &[Agent],
    skip: Option<usize>,
    geometry: &WorldGeometry,
) -> Placement {
    let mut best = (f64::INFINITY, Vec2::ZERO);
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let p = zone.sample(rng);
        let overlap = worst_overlap(p, radius, others, skip, geometry);
        if overlap <= 0.0 {
            return Placement::Free(p);
        }
        if overlap < best.0 {
            best = (overlap, p);
        }
    }
    Placement::Crowded(best.1)
}

/// Builds the initial state: `N_p / 2` agents of group `A` on the `x < 0`
/// side and `N_p / 2` of group `B` on the `x > 0` side, at rest.
pub fn initialize(config: &SimConfig) -> Result<SimState> {
    config.validate()?;
    let geometry = WorldGeometry::from_config(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let half = config.n_agents / 2;
    let mut agents: Vec<Agent> = Vec::with_capacity(config.n_agents);
    for id in 0..config.n_agents {
        let group = if id < half { Group::A } else { Group::B };
        let body = draw_body_params(&mut rng);
        let zone = PlacementZone::start_side(&geometry, -group.heading(), body.radius, 0.0);
        let position = match find_position(&mut rng, &zone, body.radius, &agents, None, &geometry)
        {
            Placement::Free(p) => p,
            Placement::Crowded(_) => {
                return Err(Error::ConfigurationTooDense {
                    agent: id,
                    attempts: MAX_PLACEMENT_ATTEMPTS,
                })
            }
        };
        agents.push(Agent {
            id,
            position,
            velocity: Vec2::ZERO,
            radius: body.radius,
            mass: body.mass,
            desired_speed: body.desired_speed,
            group,
            decided_this_cycle: false,
        });
    }
    Ok(SimState {
        time: 0.0,
        agents,
        rng,
    })
}
