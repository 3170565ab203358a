//! Shared fixtures for the solver benchmarks.

use tunnel_core::PhysicalScenario;

/// Representative scenarios: propagating, evanescent and beyond the critical angle.
pub fn scenarios() -> Vec<(&'static str, PhysicalScenario)> {
    vec![
        ("propagating", PhysicalScenario::new(80.0, 70.0, 10.0, 0.3)),
        ("evanescent", PhysicalScenario::new(40.0, 50.0, 10.0, 0.1)),
        (
            "total_internal",
            PhysicalScenario::new(80.0, 70.0, 10.0, 0.9),
        ),
    ]
}
