//! Translation lengths, classification and short conjugates.

use hypwalk::{FareyElement, FareyGroup, FreeGroup, FreeWord, Model};

fn main() {
    let f = FreeGroup;
    for s in ["abAB", "aabAA", "abaBA", "bbb"] {
        let g: FreeWord = s.parse().expect("word");
        let t = f.translation_length(&g, 1).expect("horizon");
        let c = f.conjugacy_min_length(&g);
        println!("{g}: tau = {}, core {} via conjugator {}", t.value, c.core, c.conjugator);
    }

    let m = FareyGroup;
    let rl = FareyElement::r().mul(&FareyElement::l());
    let examples = [
        ("RL", rl.clone()),
        ("(RL)^3", rl.pow(3)),
        ("R^5", FareyElement::r_pow(5)),
        ("[[0,-1],[1,0]]", m.parse_element("[[0,-1],[1,0]]").expect("matrix")),
    ];
    for (name, g) in examples {
        let t = m.translation_length(&g, 64).expect("horizon");
        println!(
            "{name}: trace {}, {:?}, tau = {} (stabilized: {})",
            g.trace(),
            g.classify(),
            t.value,
            t.stabilized
        );
    }
}
