"""
Test Suite
---------

Flat pytest modules, one per area:

tests/
├── test_states.py        # labels and (q, p) <-> (u, v)
├── test_models.py        # symbols and their jets
├── test_dynamics.py      # flow, tangent matrix, action
├── test_shooting.py      # Newton shooting, multistart, continuation, caustics
├── test_airy.py          # Airy functions and the cubic integral
├── test_transforms.py    # conjugate transform pair
├── test_oracle.py        # exact propagators
├── test_propagators.py   # bare and conjugate semiclassical sums
├── test_uniform.py       # uniform approximation through caustics
├── test_config.py        # scenario files and validation
└── test_cli.py           # runner and command line

Long sweeps are marked slow: pytest -m "not slow".
"""
