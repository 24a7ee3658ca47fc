//! Output files.

use std::fmt::Write as _;
use std::path::Path;

use super::CliError;
use crate::constants::report::fmt_sig17;
use crate::fem::FieldP1;
use crate::mesh::TriMesh;

pub fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn read_field(mesh: &TriMesh, dir: &Path, name: &str) -> Result<FieldP1, CliError> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Input(format!("cannot read {} (run `solve` first): {e}", path.display())))?;
    FieldP1::from_csv(mesh, &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Legacy ASCII VTK unstructured grid with point scalars `theta` and `phi`.
pub fn fields_vtk(mesh: &TriMesh, theta: &FieldP1, phi: &FieldP1) -> String {
    let mut s = String::from("# vtk DataFile Version 3.0\nthermoflux fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.num_nodes());
    for p in mesh.nodes() {
        let _ = writeln!(s, "{} {} 0", fmt_sig17(p[0]), fmt_sig17(p[1]));
    }
    let nt = mesh.num_triangles();
    let _ = writeln!(s, "CELLS {nt} {}", 4 * nt);
    for t in mesh.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "POINT_DATA {}", mesh.num_nodes());
    for (name, f) in [("theta", theta), ("phi", phi)] {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in f.values() {
            let _ = writeln!(s, "{}", fmt_sig17(*v));
        }
    }
    s
}
