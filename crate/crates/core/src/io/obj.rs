use std::io::Write;

use crate::surface_assembler::mesh::TriangleMesh;

/// Wavefront OBJ: `v x y z` lines, then `f i j k` with one-based indices.
pub fn write_obj<W: Write>(mut out: W, mesh: &TriangleMesh) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {:.13e} {:.13e} {:.13e}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    out.flush()
}

pub fn obj_string(mesh: &TriangleMesh) -> String {
    let mut buf = Vec::new();
    write_obj(&mut buf, mesh).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_are_one_based() {
        let mesh = TriangleMesh {
            vertices: vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2]],
        };
        let text = obj_string(&mesh);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().last(), Some("f 1 2 3"));
    }
}
