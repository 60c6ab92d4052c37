"""BB84 decoy-pulse QKD link model under a photon-number-splitting attack.

Thin wrapper around the C++ extension: analytic per-event impairment
enumeration (key rate, yields, detectability ratios) plus the event-by-event
Monte Carlo oracle used to cross-validate it.
"""

from qkdenum._core import (  # noqa: F401
    AgreementReport,
    BobStreamTally,
    BobTally,
    CounterCheck,
    DesignConstraints,
    EmissionProfile,
    EveClassProbs,
    EveReception,
    FiberSegment,
    GridPointEval,
    LinkGeometry,
    McOptions,
    McTally,
    Metrics,
    PulseClassCounts,
    ReceiverParams,
    Scenario,
    ScenarioEnumeration,
    SelectionReport,
    SourceParams,
    StreamCounters,
    SurvivalProbs,
    SweepAxis,
    SweepRow,
    TruncationMode,
    __version__,
    arrival_mean,
    baseline_scenario,
    bob_optical_counts,
    bob_photodetected_counts,
    compare,
    default_decoy_grid,
    emission_profile,
    enumerate_scenario,
    fiber_segment,
    load_scenario,
    metrics,
    poisson_pmf,
    post_process,
    reception_probs_at_eve,
    scenario_digest,
    scenario_from_json,
    scenario_to_json,
    select_decoy_mean,
    simulate,
    simulate_one,
    solve_photon_loss_prob,
    survival_probs,
    sweep,
    validate,
)
