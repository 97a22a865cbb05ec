//! Problem and experiment presets compiled into the binary.

pub const NAMES: [&str; 10] = [
    "z2-fig4",
    "su2-pool",
    "su2-2to2",
    "z2xz2-pool",
    "zn-conv",
    "s3-qubits",
    "trivial-1to1",
    "heisenberg-eqcnn",
    "heisenberg-hea",
    "heisenberg-smoke",
];

pub fn get(name: &str) -> Option<&'static str> {
    Some(match name {
        "z2-fig4" => include_str!("../presets/z2-fig4.json"),
        "su2-pool" => include_str!("../presets/su2-pool.json"),
        "su2-2to2" => include_str!("../presets/su2-2to2.json"),
        "z2xz2-pool" => include_str!("../presets/z2xz2-pool.json"),
        "zn-conv" => include_str!("../presets/zn-conv.json"),
        "s3-qubits" => include_str!("../presets/s3-qubits.json"),
        "trivial-1to1" => include_str!("../presets/trivial-1to1.json"),
        "heisenberg-eqcnn" => include_str!("../presets/heisenberg-eqcnn.json"),
        "heisenberg-hea" => include_str!("../presets/heisenberg-hea.json"),
        "heisenberg-smoke" => include_str!("../presets/heisenberg-smoke.json"),
        _ => return None,
    })
}
