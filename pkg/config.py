"""
Configuration module for simulation limits, numeric tolerances and logging.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Dense simulation cap (a 12-qubit unitary is 4096 x 4096 complex)
SIMULATION_QUBIT_CAP = int(os.getenv("QPH_SIMULATION_CAP", "12"))

# Tolerances
STRUCTURAL_TOLERANCE = float(os.getenv("QPH_STRUCTURAL_TOL", "1e-10"))
COMPILED_TOLERANCE = float(os.getenv("QPH_COMPILED_TOL", "1e-9"))
ZERO_ANGLE_TOLERANCE = float(os.getenv("QPH_ZERO_ANGLE_TOL", "1e-12"))

# Logging
LOG_LEVEL = os.getenv("QPH_LOG_LEVEL", "WARNING")

# Bundled assets
SERVICES_DIR = Path(__file__).resolve().parent / "services"
PRELUDE_PATH = SERVICES_DIR / "prelude.qph"
GRAMMAR_PATH = SERVICES_DIR / "grammar.lark"
PROGRAMS_DIR = Path(__file__).resolve().parent / "programs"
