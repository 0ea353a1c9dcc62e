#![no_main]

use libfuzzer_sys::fuzz_target;

// The points reader must reject arbitrary input gracefully: parse, validate,
// and build the solver instance without panicking.
fuzz_target!(|data: &[u8]| {
    if let Ok(pf) = hypersc_cli::formats::parse_points_file(data) {
        let _ = hypersc_cli::formats::points_file_to_instance(&pf, 1e-4);
    }
});
