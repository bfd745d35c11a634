//! Driving, contact and social forces, plus wall interactions.
//!
//! Pair forces are evaluated once per unordered pair through a uniform cell
//! grid and applied with opposite signs to both partners, so internal forces
//! cancel by construction.

use crate::config::SimConfig;
use crate::dynamics::desired_direction;
use crate::error::{Error, Result};
use crate::geometry::{Agent, SimState, WallSegment, WorldGeometry, DIAMETER_RANGE};
use crate::vec2::Vec2;

/// Edge-to-edge distance beyond which the social force is neglected (m).
pub const SOCIAL_CUTOFF: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceParams {
    pub social_amplitude: f64,
    pub social_range: f64,
    pub switch_distance: f64,
    pub k_n: f64,
    pub k_t: f64,
    pub tau: f64,
    pub cutoff: f64,
}

impl ForceParams {
    pub fn from_config(config: &SimConfig) -> Self {
        ForceParams {
            social_amplitude: config.social_amplitude,
            social_range: config.social_range,
            switch_distance: config.switch_distance,
            k_n: config.k_n,
            k_t: config.k_t,
            tau: config.tau,
            cutoff: SOCIAL_CUTOFF,
        }
    }
}

impl Default for ForceParams {
    fn default() -> Self {
        Self::from_config(&SimConfig::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceBreakdown {
    pub driving: Vec2,
    pub contact: Vec2,
    pub social: Vec2,
    pub wall: Vec2,
}

impl ForceBreakdown {
    #[inline]
    pub fn total(&self) -> Vec2 {
        self.driving + self.contact + self.social + self.wall
    }

    pub fn is_finite(&self) -> bool {
        self.driving.is_finite()
            && self.contact.is_finite()
            && self.social.is_finite()
            && self.wall.is_finite()
    }
}

/// Relative placement of agent `i` with respect to agent `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    /// Centre distance minus the sum of radii (m). Negative when overlapping.
    pub distance: f64,
    /// Unit vector pointing from `j` to `i`.
    pub normal: Vec2,
    pub tangent: Vec2,
}

impl PairGeometry {
    /// Geometry of `i` relative to `j`. Coincident centres fall back to `+x`.
    #[inline]
    pub fn between(pos_i: Vec2, r_i: f64, pos_j: Vec2, r_j: f64) -> Self {
        let delta = pos_i - pos_j;
        let dist = delta.norm();
        let normal = if dist > 0.0 { delta / dist } else { Vec2::X };
        PairGeometry {
            distance: dist - r_i - r_j,
            normal,
            tangent: normal.perp(),
        }
    }

    pub fn of_agents(i: &Agent, j: &Agent) -> Self {
        Self::between(i.position, i.radius, j.position, j.radius)
    }
}

/// Signed social amplitude: repulsive up to and including the switch
/// distance, attractive beyond it.
#[inline]
pub fn social_amplitude(params: &ForceParams, distance: f64) -> f64 {
    if distance <= params.switch_distance {
        params.social_amplitude
    } else {
        -params.social_amplitude
    }
}

/// `m (v_d e_d - v) / tau`
#[inline]
pub fn driving_force(params: &ForceParams, agent: &Agent, direction: Vec2) -> Vec2 {
    (direction * agent.desired_speed - agent.velocity) * (agent.mass / params.tau)
}

#[inline]
pub fn social_force_pair(params: &ForceParams, pair: &PairGeometry) -> Vec2 {
    if pair.distance > params.cutoff {
        return Vec2::ZERO;
    }
    let magnitude = social_amplitude(params, pair.distance)
        * (-pair.distance / params.social_range).exp();
    pair.normal * magnitude
}

/// Contact force on `i`; `relative_velocity` is `v_j - v_i`.
#[inline]
pub fn contact_force_pair(params: &ForceParams, pair: &PairGeometry, relative_velocity: Vec2) -> Vec2 {
    if pair.distance >= 0.0 {
        return Vec2::ZERO;
    }
    let overlap = -pair.distance;
    let sliding = relative_velocity.dot(pair.tangent);
    pair.normal * (params.k_n * overlap) + pair.tangent * (params.k_t * overlap * sliding)
}

/// Wall push on an agent: always repulsive, with the contact law on
/// penetration.
pub fn wall_force(params: &ForceParams, agent: &Agent, wall: &WallSegment) -> Vec2 {
    let closest = wall.closest_point(agent.position);
    let delta = agent.position - closest;
    let dist = delta.norm();
    let clearance = dist - agent.radius;
    if clearance > params.cutoff {
        return Vec2::ZERO;
    }
    let normal = match delta.normalized() {
        Some(n) => n,
        // centre exactly on the wall line: push along the segment normal,
        // toward the side the agent is walking from
        None => {
            let n = (wall.end - wall.start).perp().normalized().unwrap_or(Vec2::X);
            if n.dot(agent.velocity) > 0.0 {
                -n
            } else {
                n
            }
        }
    };
    let pair = PairGeometry {
        distance: clearance,
        normal,
        tangent: normal.perp(),
    };
    let social = normal * (params.social_amplitude * (-clearance / params.social_range).exp());
    social + contact_force_pair(params, &pair, -agent.velocity)
}

const EMPTY: usize = usize::MAX;

/// Uniform cell list rebuilt on every evaluation.
#[derive(Debug, Clone)]
pub struct NeighborGrid {
    cell_size: f64,
    origin: Vec2,
    nx: usize,
    ny: usize,
    head: Vec<usize>,
    next: Vec<usize>,
}

impl NeighborGrid {
    pub fn new(geometry: &WorldGeometry, cutoff: f64) -> Self {
        let cell_size = cutoff + DIAMETER_RANGE.1;
        // one spare cell of padding around the corridor for transient excursions
        let origin = Vec2::new(
            -geometry.half_length - cell_size,
            -0.5 * geometry.width - cell_size,
        );
        let nx = ((2.0 * geometry.half_length + 2.0 * cell_size) / cell_size).ceil() as usize + 1;
        let ny = ((geometry.width + 2.0 * cell_size) / cell_size).ceil() as usize + 1;
        NeighborGrid {
            cell_size,
            origin,
            nx,
            ny,
            head: vec![EMPTY; nx * ny],
            next: Vec::new(),
        }
    }

    #[inline]
    fn cell_of(&self, p: Vec2) -> (usize, usize) {
        let cx = ((p.x - self.origin.x) / self.cell_size).floor();
        let cy = ((p.y - self.origin.y) / self.cell_size).floor();
        let cx = if cx.is_finite() { cx.clamp(0.0, (self.nx - 1) as f64) } else { 0.0 };
        let cy = if cy.is_finite() { cy.clamp(0.0, (self.ny - 1) as f64) } else { 0.0 };
        (cx as usize, cy as usize)
    }

    pub fn rebuild(&mut self, agents: &[Agent]) {
        self.head.fill(EMPTY);
        self.next.clear();
        self.next.resize(agents.len(), EMPTY);
        for (i, a) in agents.iter().enumerate() {
            let (cx, cy) = self.cell_of(a.position);
            let c = cy * self.nx + cx;
            self.next[i] = self.head[c];
            self.head[c] = i;
        }
    }

    /// Calls `f(i, j)` once for every unordered pair in the same or
    /// adjacent cells, in a fixed order.
    pub fn for_each_pair<F: FnMut(usize, usize)>(&self, mut f: F) {
        const FORWARD: [(isize, isize); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];
        for cy in 0..self.ny {
            for cx in 0..self.nx {
                let mut i = self.head[cy * self.nx + cx];
                while i != EMPTY {
                    let mut j = self.next[i];
                    while j != EMPTY {
                        f(i, j);
                        j = self.next[j];
                    }
                    for (dx, dy) in FORWARD {
                        let ox = cx as isize + dx;
                        let oy = cy as isize + dy;
                        if ox < 0 || oy < 0 || ox >= self.nx as isize || oy >= self.ny as isize {
                            continue;
                        }
                        let mut j = self.head[oy as usize * self.nx + ox as usize];
                        while j != EMPTY {
                            f(i, j);
                            j = self.next[j];
                        }
                    }
                    i = self.next[i];
                }
            }
        }
    }
}

/// Reusable force evaluator holding the neighbour grid and output buffer.
#[derive(Debug, Clone)]
pub struct ForceField {
    pub params: ForceParams,
    grid: NeighborGrid,
    forces: Vec<ForceBreakdown>,
}

impl ForceField {
    pub fn new(params: ForceParams, geometry: &WorldGeometry) -> Self {
        ForceField {
            grid: NeighborGrid::new(geometry, params.cutoff),
            params,
            forces: Vec::new(),
        }
    }

    pub fn compute(
        &mut self,
        agents: &[Agent],
        geometry: &WorldGeometry,
        time: f64,
    ) -> Result<&[ForceBreakdown]> {
        let params = self.params;
        self.forces.clear();
        self.forces.resize(agents.len(), ForceBreakdown::default());

        for (f, a) in self.forces.iter_mut().zip(agents) {
            f.driving = driving_force(&params, a, desired_direction(a, geometry));
        }

        self.grid.rebuild(agents);
        let forces = &mut self.forces;
        let reach = params.cutoff;
        self.grid.for_each_pair(|i, j| {
            let (ai, aj) = (&agents[i], &agents[j]);
            let delta = ai.position - aj.position;
            let reach_ij = reach + ai.radius + aj.radius;
            if delta.norm_sq() > reach_ij * reach_ij {
                return;
            }
            let pair = PairGeometry::of_agents(ai, aj);
            let social = social_force_pair(&params, &pair);
            forces[i].social += social;
            forces[j].social -= social;
            if pair.distance < 0.0 {
                let contact = contact_force_pair(&params, &pair, aj.velocity - ai.velocity);
                forces[i].contact += contact;
                forces[j].contact -= contact;
            }
        });

        let half_w = 0.5 * geometry.width;
        for (f, a) in self.forces.iter_mut().zip(agents) {
            let reach_w = reach + a.radius;
            if a.position.x.abs() <= reach_w {
                for w in geometry.door_wall() {
                    f.wall += wall_force(&params, a, w);
                }
            }
            if a.position.y.abs() >= half_w - reach_w {
                for w in geometry.side_walls() {
                    f.wall += wall_force(&params, a, w);
                }
            }
        }

        if let Some(bad) = self.forces.iter().position(|f| !f.is_finite()) {
            return Err(Error::NumericBlowup {
                agent: agents[bad].id,
                time,
            });
        }
        Ok(&self.forces)
    }
}

/// Per-agent force breakdown for a whole state.
pub fn total_forces(
    state: &SimState,
    geometry: &WorldGeometry,
    params: &ForceParams,
) -> Result<Vec<ForceBreakdown>> {
    let mut field = ForceField::new(*params, geometry);
    field
        .compute(&state.agents, geometry, state.time)
        .map(<[ForceBreakdown]>::to_vec)
}
