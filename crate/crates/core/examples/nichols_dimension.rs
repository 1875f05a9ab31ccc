//! Graded dimensions of a rank-2 Nichols algebra with a ζ₃ vertex, a −1 vertex and edge −ζ₃.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::nichols::NicholsBasis;

fn main() {
    let space = Arc::new(BraidedSpace::parse(6, &[vec!["z^2", "-z^2"], vec!["1", "-1"]]).unwrap());
    let dynkin = space.dynkin();
    println!(
        "vertices {:?}, {} edge(s)",
        dynkin.vertex_labels.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        dynkin.edge_count()
    );
    let basis = NicholsBasis::build(&space, 12).unwrap();
    println!("hilbert {:?}", basis.hilbert());
    println!("dim B(V) = {:?}, top degree {:?}", basis.dimension(), basis.top_degree());
    for (d, block) in basis.blocks() {
        if block.dim() > 0 && d.iter().sum::<u32>() == 3 {
            println!("degree {d:?}: {}", basis.format_block(d).join(", "));
        }
    }
}
