/// Crowding distance of each member of `front` (same order as `front`).
///
/// Per objective, the members are sorted by value; the two extremes get
/// infinite distance and every interior member adds the normalised gap between
/// its neighbours, `(f[k+1] − f[k−1]) / (f_max − f_min)`. An objective that is
/// flat across the front adds nothing.
pub fn crowding_distance(front: &[usize], objectives: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = objectives[front[0]].len();
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        let value = |k: usize| objectives[front[k]][obj];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(front[a].cmp(&front[b])));
        let lo = value(order[0]);
        let hi = value(order[n - 1]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 || !span.is_finite() {
            continue;
        }
        for k in 1..n - 1 {
            dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / span;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fronts_are_all_boundary() {
        let objs = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert_eq!(crowding_distance(&[0], &objs), vec![f64::INFINITY]);
        assert_eq!(crowding_distance(&[0, 1], &objs), vec![f64::INFINITY; 2]);
    }

    #[test]
    fn single_objective_interior() {
        let objs = vec![vec![4.0], vec![1.0], vec![2.0]];
        let d = crowding_distance(&[0, 1, 2], &objs);
        assert_eq!(d, vec![f64::INFINITY, f64::INFINITY, 1.0]);
    }

    #[test]
    fn two_objective_interior() {
        let objs = vec![vec![1.0, 4.0], vec![2.0, 2.0], vec![4.0, 1.0]];
        let d = crowding_distance(&[0, 1, 2], &objs);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn flat_objective_contributes_nothing() {
        let objs = vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0], vec![5.0, 5.0]];
        let d = crowding_distance(&[0, 1, 2, 3], &objs);
        // objective 0: (3-1)/4 and (5-2)/4; objective 1 adds 0
        assert!((d[1] - 0.5).abs() < 1e-15);
        assert!((d[2] - 0.75).abs() < 1e-15);
        assert!(d.iter().all(|x| !x.is_nan()));
    }

    #[test]
    fn works_on_a_subset_of_indices() {
        let objs = vec![vec![9.0], vec![1.0], vec![0.0], vec![3.0]];
        let d = crowding_distance(&[1, 3, 0], &objs);
        // sorted: 1 (idx1), 3 (idx3), 9 (idx0) → middle is idx3 with (9−1)/8
        assert_eq!(d[1], 1.0);
    }
}
