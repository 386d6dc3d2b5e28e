#-------------------------------------------------------------------------------------#
# File: main.py
# Description: Command-line entry point for the coherent-state propagator toolkit
# Version: 0.1.0
#-------------------------------------------------------------------------------------#
# SETUP GUIDE:
#
# Initial Setup:
# 1. Create virtual environment  -> python -m venv venv
# 2. Activate virtual environment:
#    - Windows                   -> .\venv\Scripts\activate
#    - Unix/MacOS               -> source venv/bin/activate
# 3. Install the package        -> pip install -e .
#
# Running:
# 1. Reproduce the quartic sweep -> python main.py propagate --scenario fig1 --out results/fig1.csv
# 2. Oscillator sanity check     -> python main.py propagate --scenario ho-sanity
# 3. Transform validations       -> python main.py transform-demo
# 4. Locate a caustic            -> python main.py caustic-scan --scenario caustic
#
# Development Commands:
# 1. Run the fast tests        -> pytest -m "not slow"
# 2. Run everything            -> pytest
# 3. Logs                      -> logs/bargmann.log, logs/numerics.log (BARGMANN_LOG_DIR overrides)
#
#-------------------------------------------------------------------------------------#

#----------# IMPORTS #----------#
import sys

from colorama import init, Fore, Style

from bargmann.cli import main as cli_main

# Initialize colorama for Windows support
init()


#----------# BANNER #----------#
def print_welcome_message() -> None:
    """Print the startup banner to stderr so tables on stdout stay clean."""
    print(f"\n{Fore.GREEN}{'='*60}", file=sys.stderr)
    print("🌀 Coherent-state propagators: exact, bare and uniform", file=sys.stderr)
    print("💥 Finite through phase-space caustics", file=sys.stderr)
    print(f"{'='*60}{Style.RESET_ALL}\n", file=sys.stderr)


#----------# MAIN #----------#
def main() -> int:
    print_welcome_message()
    try:
        return cli_main()
    except KeyboardInterrupt:
        print(f"\n{Fore.YELLOW}👋 Interrupted{Style.RESET_ALL}", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
