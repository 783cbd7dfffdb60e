#![no_main]
use libfuzzer_sys::fuzz_target;
use quatrange::io::parse_matrix_str;
use quatrange::range::numerical_radius;
use quatrange::spectrum::spherical_spectrum;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(a) = parse_matrix_str(text) else { return };
    // keep the eigen-solves small and away from overflow
    if a.dim() == 0 || a.dim() > 4 || a.as_slice().iter().any(|q| q.norm() > 1e6) {
        return;
    }
    let _ = spherical_spectrum(&a);
    if let Ok(w) = numerical_radius(&a, 64) {
        assert!(w >= 0.0 && w.is_finite());
    }
});
