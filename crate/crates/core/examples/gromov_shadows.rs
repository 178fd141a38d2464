//! Gromov products, shadows and the four-point condition on the Cayley tree.

use hypwalk::hypgeom::{four_point_defect, in_set_shadow};
use hypwalk::{gromov_product, in_shadow, FreeGroup, FreeWord, Model, Shadow};

fn w(s: &str) -> FreeWord {
    s.parse().expect("word")
}

fn main() {
    let m = FreeGroup;
    let one = FreeWord::identity();
    let (x, y) = (w("aabab"), w("aabba"));
    println!("d(x, y) = {}", m.distance(&x, &y));
    println!("(x . y)_1 = {} (common prefix of {x} and {y})", gromov_product(&m, &one, &x, &y));

    let s = Shadow::new(one.clone(), w("aaaa"), 3.0);
    for probe in ["aaab", "aaBa", "abab", "aaaaaa"] {
        println!("{probe} in S_1(aaaa, 3): {}", in_shadow(&m, &s, &w(probe)));
    }

    let t = [w("a"), w("bb")];
    println!("bbA in S_1({{a, bb}}, 2): {}", in_set_shadow(&m, &t, 2.0, &w("bbA")));

    let pts = [w("ab"), w("aB"), w("BA"), w("bbb")];
    println!("four-point defect: {}", four_point_defect(&m, [&pts[0], &pts[1], &pts[2], &pts[3]]));
    println!("declared delta: {}", m.descriptor().delta);
}
