# mixphase - geometric phases of mixed quantum states
"""mixphase: geometric phases of mixed states along nonunitary paths.

Core Components:
- Spectral paths: branch-tracked eigendecomposition of sampled density operators
- Phase functionals: abelian overlap-product phase and block Wilson lines
- Purification: connecting, parallel-transported and system+ancilla unitaries
- Lindblad: fixed-step master-equation integration and dephasing-qubit oracles
- Scenarios: validated scenario documents, sweeps, fringes and the CLI
"""
