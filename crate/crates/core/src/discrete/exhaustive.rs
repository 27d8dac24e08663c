use super::tsp::HeldKarp;
use super::{GridInstance, GridSolution};
use crate::error::{Error, Result};

/// Largest grid (in points) the exhaustive search accepts: a 4×4 grid, i.e.
/// 2¹⁵ facility sets and tours of up to 16 stops.
pub const EXHAUSTIVE_MAX_POINTS: usize = 16;

/// Global optimum over every facility set containing the depot, with
/// nearest assignment and exact tours. Ties keep the set enumerated first.
pub fn exhaustive_optimum(inst: &GridInstance) -> Result<GridSolution> {
    inst.validate()?;
    let n = inst.len();
    if n > EXHAUSTIVE_MAX_POINTS {
        return Err(Error::TooLarge {
            what: "exhaustive search",
            detail: format!("{n} grid points, cap is {EXHAUSTIVE_MAX_POINTS}"),
        });
    }
    // Tour nodes: the depot first, then every other site in index order.
    let sites: Vec<usize> = std::iter::once(inst.depot)
        .chain((0..n).filter(|&j| j != inst.depot))
        .collect();
    let dist: Vec<Vec<f64>> = sites
        .iter()
        .map(|&a| sites.iter().map(|&b| inst.distance(a, b)).collect())
        .collect();
    let hk = HeldKarp::new(&dist);
    let to_customer: Vec<Vec<f64>> = (0..n)
        .map(|p| sites.iter().map(|&s| inst.distance(p, s)).collect())
        .collect();

    let mut best: Option<(f64, usize)> = None;
    for mask in 0..=hk.full_mask() {
        let open = (mask << 1) | 1;
        let outbound: f64 = to_customer
            .iter()
            .map(|d| {
                (0..sites.len())
                    .filter(|&k| open & (1 << k) != 0)
                    .map(|k| d[k])
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        let total = inst.facility_cost * open.count_ones() as f64
            + inst.outbound_rate * outbound
            + inst.inbound_rate * hk.length(mask);
        if best.map_or(true, |(b, _)| total < b) {
            best = Some((total, mask));
        }
    }
    let (_, mask) = best.expect("at least the depot-only set");
    let tour: Vec<usize> = hk.tour(mask).into_iter().map(|k| sites[k]).collect();
    let mut facilities = tour.clone();
    facilities.sort_unstable();
    GridSolution::from_parts(inst, facilities, tour)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Metric;

    #[test]
    fn huge_facility_cost_opens_one() {
        for metric in [Metric::Euclid, Metric::L1] {
            let inst = GridInstance::new(4, 1e9, 1.0, 1.0, metric, 5).unwrap();
            let sol = exhaustive_optimum(&inst).unwrap();
            assert_eq!(sol.facilities, vec![5]);
        }
    }

    #[test]
    fn cheap_facilities_open_everywhere() {
        let inst = GridInstance::new(3, 1e-9, 1.0, 1e-9, Metric::Euclid, 0).unwrap();
        let sol = exhaustive_optimum(&inst).unwrap();
        assert_eq!(sol.facilities, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn beats_every_enumerated_alternative_on_3x3() {
        // Independent oracle: evaluate every set with brute-force tours.
        let inst = GridInstance::new(3, 2.0, 1.0, 1.5, Metric::L1, 4).unwrap();
        let sol = exhaustive_optimum(&inst).unwrap();
        let others: Vec<usize> = (0..9).filter(|&j| j != 4).collect();
        let mut best = f64::INFINITY;
        for mask in 0..(1u32 << 8) {
            let mut fac = vec![4];
            fac.extend((0..8).filter(|k| mask & (1 << k) != 0).map(|k| others[k]));
            let pts: Vec<_> = fac.iter().map(|&j| inst.point(j)).collect();
            let tour = super::super::tsp_tour(&pts, inst.metric, super::super::TourMode::Exact).unwrap();
            let order: Vec<usize> = tour.order.iter().map(|&k| fac[k]).collect();
            let mut sorted = fac.clone();
            sorted.sort_unstable();
            let s = GridSolution::from_parts(&inst, sorted, order).unwrap();
            best = best.min(s.objective.total);
        }
        assert!((sol.objective.total - best).abs() < 1e-9);
    }

    #[test]
    fn size_cap() {
        let inst = GridInstance::new(5, 1.0, 1.0, 1.0, Metric::Euclid, 0).unwrap();
        assert!(matches!(exhaustive_optimum(&inst), Err(Error::TooLarge { .. })));
    }
}
