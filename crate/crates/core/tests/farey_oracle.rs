mod common;

use common::{BoundedFarey, RawSlope, INF};
use hypwalk::models::{farey_slope_distance, Slope};

fn slope((p, q): RawSlope) -> Slope {
    Slope::new(p, q).unwrap()
}

#[test]
fn distance_from_infinity_matches_bfs_for_denominators_up_to_50() {
    let small = BoundedFarey { q_max: 50, lo: -2, hi: 3 };
    let large = BoundedFarey { q_max: 100, lo: -4, hi: 5 };
    let d_small = small.bfs(INF);
    let d_large = large.bfs(INF);
    let mut checked = 0;
    for v in small.vertices() {
        let oracle = d_small[&v];
        assert_eq!(d_large[&v], oracle, "oracle unstable at {v:?}");
        assert_eq!(farey_slope_distance(&Slope::infinity(), &slope(v)), oracle, "{v:?}");
        checked += 1;
    }
    assert!(checked > 3500, "{checked}");
}

#[test]
fn pairwise_distances_match_bfs() {
    let small = BoundedFarey { q_max: 50, lo: -2, hi: 3 };
    let large = BoundedFarey { q_max: 100, lo: -4, hi: 5 };
    let sources: Vec<RawSlope> = vec![(0, 1), (1, 2), (2, 5), (3, 7), (13, 21), (1, 50), (49, 50), (34, 55)];
    for s in sources {
        let d_small = small.bfs(s);
        let d_large = large.bfs(s);
        for (&v, &d) in &d_small {
            // only targets in the unit window, away from the window edges
            if v != INF && (v.0 < -v.1 || v.0 > 2 * v.1) {
                continue;
            }
            assert_eq!(d_large[&v], d, "oracle unstable at {s:?} -> {v:?}");
            assert_eq!(farey_slope_distance(&slope(s), &slope(v)), d, "{s:?} -> {v:?}");
        }
    }
}

#[test]
fn worked_examples() {
    let bf = BoundedFarey { q_max: 10, lo: -1, hi: 2 };
    let d = bf.bfs(INF);
    assert_eq!(d[&(0, 1)], 1);
    assert_eq!(d[&(1, 1)], 1);
    assert_eq!(d[&(2, 5)], 3);
}
