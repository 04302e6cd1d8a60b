//! Social-group clustering.
//!
//! People closer than a distance threshold are linked, and groups are the
//! connected components of that graph. The robot sits at the origin; its
//! interaction group is the cluster with a member inside the engagement zone
//! nearest to the robot.

use serde::Serialize;

use crate::world::{PersonId, PersonObservation};

pub const DEFAULT_DIST_THRESHOLD: f64 = 1.5;
pub const DEFAULT_ZONE_RADIUS: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCluster {
    /// Sorted ascending.
    pub members: Vec<PersonId>,
    pub includes_robot: bool,
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

/// Clusters persons into groups linked by pairwise distance ≤ `dist_threshold`.
///
/// The result does not depend on input order: members are sorted and clusters
/// are ordered by their smallest member id.
pub fn cluster_groups(persons: &[PersonObservation], dist_threshold: f64) -> Vec<GroupCluster> {
    let mut sorted = persons.to_vec();
    sorted.sort_by_key(|p| p.person_id);

    let mut sets = DisjointSet::new(sorted.len());
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[i].distance_to(&sorted[j]) <= dist_threshold {
                sets.union(i, j);
            }
        }
    }

    let mut clusters: Vec<(usize, GroupCluster)> = Vec::new();
    for (i, person) in sorted.iter().enumerate() {
        let root = sets.find(i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, cluster)) => cluster.members.push(person.person_id),
            None => clusters.push((
                root,
                GroupCluster {
                    members: vec![person.person_id],
                    includes_robot: false,
                },
            )),
        }
    }
    // persons were visited in id order, so clusters already are ordered by
    // smallest member
    clusters.into_iter().map(|(_, c)| c).collect()
}

/// Marks the cluster the robot is interacting with and returns its index.
///
/// A cluster qualifies when one of its members is within `zone_radius` of the
/// origin. The cluster whose nearest member is closest wins; ties go to the
/// cluster with the smaller smallest member id.
pub fn mark_interaction_group(
    clusters: &mut [GroupCluster],
    persons: &[PersonObservation],
    zone_radius: f64,
) -> Option<usize> {
    let range_of = |id: PersonId| {
        persons
            .iter()
            .find(|p| p.person_id == id)
            .map(PersonObservation::range)
            .unwrap_or(f64::INFINITY)
    };
    let mut best: Option<(usize, f64)> = None;
    for (index, cluster) in clusters.iter_mut().enumerate() {
        cluster.includes_robot = false;
        let nearest = cluster
            .members
            .iter()
            .map(|&id| range_of(id))
            .fold(f64::INFINITY, f64::min);
        if nearest > zone_radius {
            continue;
        }
        // clusters arrive ordered by smallest member, so strict < keeps the
        // earlier cluster on ties
        if best.is_none_or(|(_, d)| nearest < d) {
            best = Some((index, nearest));
        }
    }
    let (index, _) = best?;
    clusters[index].includes_robot = true;
    Some(index)
}

/// Size of the robot's interaction group, 0 if nobody is in the zone.
pub fn interaction_group_size(
    clusters: &[GroupCluster],
    persons: &[PersonObservation],
    zone_radius: f64,
) -> usize {
    let mut clusters = clusters.to_vec();
    mark_interaction_group(&mut clusters, persons, zone_radius)
        .map(|i| clusters[i].members.len())
        .unwrap_or(0)
}
