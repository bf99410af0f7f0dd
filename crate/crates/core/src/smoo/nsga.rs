//! Fast non-dominated sorting and crowding distance (minimization).

/// `a` Pareto-dominates `b`: no worse everywhere, better somewhere.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fronts of indices, best first. Each front is in ascending index order.
pub fn fast_non_dominated_sort(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let m = objs.len();
    let mut dominated_by = vec![0usize; m];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if pareto_dominates(&objs[i], &objs[j]) {
                dominates[i].push(j);
                dominated_by[j] += 1;
            } else if pareto_dominates(&objs[j], &objs[i]) {
                dominates[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..m).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front`, aligned with it. Boundary
/// points get `+∞`; an objective with zero range adds nothing.
pub fn crowding_distance(objs: &[Vec<f64>], front: &[usize]) -> Vec<f64> {
    let len = front.len();
    let mut dist = vec![0.0; len];
    if len == 0 {
        return dist;
    }
    let n_obj = objs[front[0]].len();
    for k in 0..n_obj {
        let mut idx: Vec<usize> = (0..len).collect();
        idx.sort_by(|&a, &b| objs[front[a]][k].total_cmp(&objs[front[b]][k]).then(a.cmp(&b)));
        let lo = objs[front[idx[0]]][k];
        let hi = objs[front[idx[len - 1]]][k];
        dist[idx[0]] = f64::INFINITY;
        dist[idx[len - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..len.saturating_sub(1) {
            let gap = objs[front[idx[w + 1]]][k] - objs[front[idx[w - 1]]][k];
            dist[idx[w]] += gap / range;
        }
    }
    dist
}
