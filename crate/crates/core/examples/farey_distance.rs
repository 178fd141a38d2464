//! Distances on the Farey graph and the orbit metric of SL(2,Z).

use hypwalk::hypgeom::estimate_delta;
use hypwalk::models::farey_slope_distance;
use hypwalk::{FareyElement, FareyGroup, Model, Slope};

fn main() {
    let inf = Slope::infinity();
    for (p, q) in [(0, 1), (1, 2), (2, 5), (13, 21), (355, 113)] {
        let s = Slope::new(p, q).expect("slope");
        println!("d(inf, {s}) = {}", farey_slope_distance(&inf, &s));
    }
    let a = Slope::new(3, 7).expect("slope");
    let b = Slope::new(-5, 8).expect("slope");
    println!("d({a}, {b}) = {}", farey_slope_distance(&a, &b));

    let m = FareyGroup;
    let g: FareyElement = m.parse_element("[[5, 2], [2, 1]]").expect("matrix");
    println!("g = {g}, g.inf = {}, d(1, g) = {}", g.basepoint_image(), m.norm(&g));
    println!("R^7 moves inf nowhere: d(1, R^7) = {}", m.norm(&FareyElement::r_pow(7)));
    let delta = estimate_delta(&m, 2000, 12, 7).expect("delta");
    println!("sampled four-point delta: {delta}");
}
