//! Reading a mesh from text, refining it and summarizing its geometry.

use thermoflux::mesh::{geometry_summary, parse_mesh, BoundaryTag};

const L_SHAPE: &str = "tmesh 1
nodes 8
0 0
1 0
2 0
0 1
1 1
2 1
0 2
1 2
triangles 6
0 1 4
0 4 3
1 2 5
1 5 4
3 4 7
3 7 6
bedges 8
0 1 G
1 2 G
2 5 G
5 4 GN
4 7 GN
7 6 G
6 3 G
3 0 G
";

fn main() {
    let mesh = parse_mesh(L_SHAPE).unwrap();
    println!("convex: {}", mesh.is_convex());
    for level in 0..3 {
        let m = (0..level).fold(mesh.clone(), |m, _| m.refine_uniform());
        let g = geometry_summary(&m);
        println!(
            "level {level}: {} nodes, {} triangles, |Ω| = {}, |Γ| = {}, |Γ_N| = {}, r_# = {:.4}",
            m.num_nodes(),
            m.num_triangles(),
            g.vol_omega,
            m.measure(BoundaryTag::Gamma),
            m.measure(BoundaryTag::GammaN),
            g.r_sharp
        );
    }
    print!("{}", mesh.refine_uniform().to_text());
}
