//! Seeded instances of every shape, written in the text format.
//!
//!     cargo run --example generate_instances -- [nodes] [seed]

use tree_interdiction::testkit::{random_tree, GeneratorConfig, Shape};
use tree_interdiction::{emit_instance, parse_instance};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(8, |s| s.parse().unwrap());
    let seed: u64 = args.next().map_or(1, |s| s.parse().unwrap());

    for shape in Shape::ALL {
        let tree = random_tree(&GeneratorConfig::new(n, seed).shape(shape).weights(9, 9));
        let text = emit_instance(&tree);
        // The text form parses back to the same tree.
        assert_eq!(parse_instance(&text).unwrap(), tree);
        println!("# {shape}: {} leaves", tree.leaves().len());
        print!("{text}");
    }
}
