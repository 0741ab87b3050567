//! Branch-set census over all assignments of a given degree, with orbits
//! under the combinatorial symmetries of the fan.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::fan::Fan;
use crate::monodromy::MonodromyContext;

/// Ray permutations mapping the set of maximal cones onto itself.
pub fn fan_automorphisms(fan: &Fan) -> Vec<Vec<usize>> {
    let m = fan.num_rays();
    let cones: BTreeSet<Vec<usize>> = fan.max_cone_rays().into_iter().collect();
    let incidence: Vec<usize> = (0..m).map(|r| fan.max_cones_containing(fan.ray_cone(r)).len()).collect();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    fn rec(
        i: usize,
        fan: &Fan,
        cones: &BTreeSet<Vec<usize>>,
        incidence: &[usize],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let m = image.len();
        if i == m {
            let ok = cones.iter().all(|c| {
                let mut img: Vec<usize> = c.iter().map(|&r| image[r]).collect();
                img.sort_unstable();
                cones.contains(&img)
            });
            if ok {
                out.push(image.clone());
            }
            return;
        }
        for j in 0..m {
            if used[j] || incidence[j] != incidence[i] {
                continue;
            }
            // Adjacency to already-placed rays must be preserved.
            let consistent = (0..i).all(|k| adjacent(fan, k, i) == adjacent(fan, image[k], j));
            if !consistent {
                continue;
            }
            used[j] = true;
            image[i] = j;
            rec(i + 1, fan, cones, incidence, image, used, out);
            used[j] = false;
            image[i] = usize::MAX;
        }
    }
    rec(0, fan, &cones, &incidence, &mut image, &mut used, &mut out);
    out
}

/// Whether two rays span a two-dimensional cone of the fan.
pub fn adjacent(fan: &Fan, a: usize, b: usize) -> bool {
    a != b && fan.face_id(&[a, b]).is_some_and(|f| fan.face(f).dim == 2)
}

/// Shortest-path distances between rays in the graph of two-dimensional cones.
pub fn ray_distances(fan: &Fan) -> Vec<Vec<usize>> {
    let m = fan.num_rays();
    (0..m)
        .map(|s| {
            let mut dist = vec![usize::MAX; m];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for y in 0..m {
                    if dist[y] == usize::MAX && adjacent(fan, x, y) {
                        dist[y] = dist[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            dist
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchOrbit {
    /// Lexicographically least member.
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// Pairwise graph distances between the rays of the representative.
    pub distances: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BranchCensus {
    pub total: u128,
    /// Branch set of every assignment, by index.
    pub branch_sets: Vec<Vec<usize>>,
    /// Number of assignments with empty branch set.
    pub unbranched: usize,
    /// Assignment indices whose branch set is nonempty and contains no two
    /// adjacent rays.
    pub admissible: Vec<usize>,
    pub orbits: Vec<BranchOrbit>,
}

/// Tabulates branch sets of all degree-`d` assignments.
pub fn branch_census(ctx: &MonodromyContext, d: usize) -> BranchCensus {
    let fan = ctx.fan();
    let branch_sets: Vec<Vec<usize>> = ctx.assignments(d).map(|a| ctx.branch_rays(&a)).collect();
    let unbranched = branch_sets.iter().filter(|b| b.is_empty()).count();
    let admissible: Vec<usize> = (0..branch_sets.len())
        .filter(|&i| {
            let b = &branch_sets[i];
            !b.is_empty() && b.iter().all(|&x| b.iter().all(|&y| !adjacent(fan, x, y)))
        })
        .collect();
    let autos = fan_automorphisms(fan);
    let dist = ray_distances(fan);
    let sets: BTreeSet<Vec<usize>> = admissible.iter().map(|&i| branch_sets[i].clone()).collect();
    let mut assigned: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut orbits: Vec<BranchOrbit> = Vec::new();
    for s in &sets {
        if assigned.contains_key(s) {
            continue;
        }
        let members: BTreeSet<Vec<usize>> = autos
            .iter()
            .map(|g| {
                let mut img: Vec<usize> = s.iter().map(|&r| g[r]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        for mbr in &members {
            assigned.insert(mbr.clone(), orbits.len());
        }
        let mut distances: Vec<usize> =
            s.iter().enumerate().flat_map(|(i, &x)| s[i + 1..].iter().map(move |&y| (x, y))).map(|(x, y)| dist[x][y]).collect();
        distances.sort_unstable();
        orbits.push(BranchOrbit { representative: s.clone(), members: members.into_iter().collect(), distances });
    }
    BranchCensus { total: ctx.count(d), branch_sets, unbranched, admissible, orbits }
}
