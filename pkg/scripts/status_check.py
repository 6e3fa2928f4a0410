# Checks the binoid-hk environment: configuration, installed packages and a small smoke computation.
import importlib
import os
import sys

# Add src and config directories to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(project_root, 'src'))
sys.path.insert(0, os.path.join(project_root, 'config'))

from config import HKConfig
from hk.hilbert_kunz import HilbertKunzCounter, NSetSpec
from presentation.dsl_parser import parse_presentation
from structure.ehk_pipeline import EHKPipeline
from utils.computation_logger import ComputationLogger

PACKAGES = ['dotenv', 'numpy', 'pandas', 'sympy']


def main() -> int:
    try:
        config = HKConfig()
        logger = ComputationLogger(config)

        print("BINOID-HK - Status Check")
        print("=" * 40)

        problems = config.validate()
        for problem in problems:
            print(f"Config problem: {problem}")
        print("Configuration:")
        for key, value in config.to_dict().items():
            print(f"  {key}: {value}")

        print("\nPackages:")
        for name in PACKAGES:
            module = importlib.import_module(name)
            print(f"  {name} {getattr(module, '__version__', '')}")

        p = parse_presentation("binoid X,Y,Z | 4X + 12Y = 16Z")
        counter = HilbertKunzCounter(config)
        n = counter.verify_primary(p, counter.maximal_ideal(p))
        counts = [s.count for s in counter.hkf_table(p, n, NSetSpec.whole(), [1, 2, 3])]
        result = EHKPipeline(config).ehk(p)
        print(f"\nSmoke test on '4X + 12Y = 16Z':")
        print(f"  hkf(1..3) = {counts}")
        print(f"  e_HK = {result.render()} (expected 13/1)")
        logger.log_result('status_check', {'hkf': counts, 'ehk': result.render()})

        if problems or result.render() != '13/1':
            print("\nStatus check found problems")
            return 1
        print("\nStatus check completed successfully!")
        return 0

    except Exception as e:
        print(f"Error checking status: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
