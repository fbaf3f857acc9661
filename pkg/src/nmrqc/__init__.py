"""Desk-scale simulator of ensemble NMR quantum computers.

Spin systems and product-operator states, hard and soft pulse dynamics,
gate compilation to pulse programs, pseudo-pure state preparation,
spectral readout and tomography, the published two-qubit algorithm
demonstrations, and separability analysis of the reachable states.
"""

from .core import (
    ProductOperatorExpansion,
    SpinSystem,
    SpinSystemError,
    assemble,
    basis_element,
    basis_ket,
    basis_projector,
    cat_ket,
    coherence_order_projection,
    coherence_orders,
    equal_up_to_global_phase,
    expand,
    fully_coupled,
    phase_distance,
    spin_chain,
    spin_pair,
)
from .pulses import (
    Couple,
    Crush,
    Delay,
    FrameShift,
    MultiQuantumFilter,
    ProgramError,
    PulseProgram,
    Rotation,
    couple_propagator,
    crush,
    delay_propagator,
    hamiltonian_diagonal,
    mq_filter,
    program,
    program_propagator,
    resolve_phase,
    rotation_propagator,
    run_program,
)
from .gates import (
    Circuit,
    CNot,
    ControlledPhase,
    Gate,
    GateError,
    Hadamard,
    Not,
    Oracle,
    PseudoHadamard,
    PseudoHadamardInv,
    Swap,
    Toffoli,
    cat_circuit,
    circuit,
    circuit_unitary,
    embed,
    gate_qubits,
    ideal_unitary,
    local_unitary,
    phase_oracle,
    xor_oracle,
)
from .compiler import (
    CompileError,
    FrameState,
    compile_circuit,
    compile_gate,
    insert_refocusing,
    phase_gate_program,
    transition_selective_cnot,
    verify_compilation,
)
from .prep import (
    PrepError,
    PrepResult,
    prep_cat_method,
    prep_logical_label,
    prep_spatial_cory,
    prep_spatial_pravia,
    prep_temporal_exhaustive,
    prep_temporal_knill,
    thermal_state,
    verify_pseudo_pure,
)
from .readout import (
    ReadoutError,
    Spectrum,
    SpectrumLine,
    assign_eigenstates,
    broadened,
    read_spectrum,
    spectrum,
    tomography,
)
from .algorithms import (
    AlgorithmError,
    BinaryFunction,
    DJStats,
    GroverSpec,
    PromiseViolation,
    binary_function,
    chloroform_system,
    classify_function,
    cytosine_system,
    deutsch,
    deutsch_jozsa_refined,
    deutsch_report,
    grover,
    grover_amplitude_trace,
    grover_chloroform_program,
    grover_iterations,
    grover_round_unitary,
    sample_counts,
    triplet_code,
)
from .entangle import (
    EntangleError,
    OvercompleteDecomposition,
    WernerState,
    decompose_overcomplete,
    double_quantum_coefficient,
    epsilon_high_temperature,
    overcomplete_basis,
    separability_bounds,
    separability_crossing,
    werner,
)
from .formats import (
    ParseError,
    format_circuit,
    format_pulses,
    format_system,
    parse_circuit,
    parse_pulses,
    parse_system,
    spectrum_csv,
)
