use super::CoverPoset;

/// Whether two covers of the same fan are isomorphic over the fan: a
/// bijection of cells preserving base cones, weights and the face relation.
///
/// Top cells are matched by backtracking; every lower cell is then forced,
/// since each down-set copies the face poset of its base.
pub fn is_isomorphic(a: &CoverPoset, b: &CoverPoset) -> bool {
    if *a.fan != *b.fan || a.len() != b.len() {
        return false;
    }
    let mut sig_a: Vec<(usize, u64)> = a.cells.iter().map(|c| (c.base, c.weight)).collect();
    let mut sig_b: Vec<(usize, u64)> = b.cells.iter().map(|c| (c.base, c.weight)).collect();
    sig_a.sort_unstable();
    sig_b.sort_unstable();
    if sig_a != sig_b {
        return false;
    }
    let tops_a = ordered_tops(a);
    let tops_b: Vec<usize> = (0..b.len()).filter(|&i| b.above[i].is_empty()).collect();
    let mut fwd = vec![usize::MAX; a.len()];
    let mut back = vec![usize::MAX; b.len()];
    search(a, b, &tops_a, &tops_b, 0, &mut fwd, &mut back)
}

/// Top cells ordered so that each one shares a face cell with an earlier one
/// whenever possible.
fn ordered_tops(c: &CoverPoset) -> Vec<usize> {
    let tops: Vec<usize> = (0..c.len()).filter(|&i| c.above[i].is_empty()).collect();
    let mut order = Vec::with_capacity(tops.len());
    let mut placed = vec![false; c.len()];
    while order.len() < tops.len() {
        let start = *tops.iter().find(|&&t| !placed[t]).unwrap();
        placed[start] = true;
        order.push(start);
        let mut i = order.len() - 1;
        while i < order.len() {
            let t = order[i];
            for &f in &c.below[t] {
                for &u in &c.above[f] {
                    if c.above[u].is_empty() && !placed[u] && c.cells[f].base != c.fan.zero_cone() {
                        placed[u] = true;
                        order.push(u);
                    }
                }
            }
            i += 1;
        }
    }
    order
}

fn search(
    a: &CoverPoset,
    b: &CoverPoset,
    tops_a: &[usize],
    tops_b: &[usize],
    k: usize,
    fwd: &mut Vec<usize>,
    back: &mut Vec<usize>,
) -> bool {
    if k == tops_a.len() {
        return fwd.iter().all(|&x| x != usize::MAX) && relation_preserved(a, b, fwd);
    }
    let t = tops_a[k];
    for &cand in tops_b {
        if back[cand] != usize::MAX || b.cells[cand].base != a.cells[t].base || b.cells[cand].weight != a.cells[t].weight {
            continue;
        }
        let mut trail = Vec::new();
        if extend(a, b, t, cand, fwd, back, &mut trail) && search(a, b, tops_a, tops_b, k + 1, fwd, back) {
            return true;
        }
        for x in trail {
            back[fwd[x]] = usize::MAX;
            fwd[x] = usize::MAX;
        }
    }
    false
}

/// Map `t ↦ cand` and the forced images of all faces of `t`.
fn extend(
    a: &CoverPoset,
    b: &CoverPoset,
    t: usize,
    cand: usize,
    fwd: &mut [usize],
    back: &mut [usize],
    trail: &mut Vec<usize>,
) -> bool {
    let mut pairs = vec![(t, cand)];
    for &y in &a.below[t] {
        let base = a.cells[y].base;
        let Some(&img) = b.below[cand].iter().find(|&&z| b.cells[z].base == base) else {
            return false;
        };
        pairs.push((y, img));
    }
    for (x, y) in pairs {
        if a.cells[x].weight != b.cells[y].weight {
            return false;
        }
        match (fwd[x], back[y]) {
            (fx, by) if fx == y && by == x => {}
            (usize::MAX, usize::MAX) => {
                fwd[x] = y;
                back[y] = x;
                trail.push(x);
            }
            _ => return false,
        }
    }
    true
}

fn relation_preserved(a: &CoverPoset, b: &CoverPoset, fwd: &[usize]) -> bool {
    (0..a.len()).all(|x| {
        let mut mapped: Vec<usize> = a.below[x].iter().map(|&y| fwd[y]).collect();
        mapped.sort_unstable();
        mapped == b.below[fwd[x]]
    })
}
