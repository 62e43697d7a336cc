#!/usr/bin/env python3
"""
Quick script to verify that the installation is correct and all dependencies are available.
"""

import sys
from pathlib import Path


def check_python_version():
    """Check Python version."""
    version = sys.version_info
    if version.major < 3 or (version.major == 3 and version.minor < 9):
        print(f"✗ Python {version.major}.{version.minor} detected. Python 3.9+ required.")
        return False
    print(f"✓ Python {version.major}.{version.minor}.{version.micro}")
    return True


def check_modules():
    """Check that all required modules are installed."""
    required_modules = [
        ('numpy', 'NumPy'),
        ('pandas', 'Pandas'),
        ('sklearn', 'scikit-learn'),
        ('yaml', 'PyYAML'),
        ('dotenv', 'python-dotenv'),
        ('pytest', 'pytest'),
    ]

    all_ok = True
    for module_name, display_name in required_modules:
        try:
            __import__(module_name)
            print(f"✓ {display_name}")
        except ImportError:
            print(f"✗ {display_name} - not installed")
            all_ok = False

    return all_ok


def check_directories():
    """Check that necessary directories exist."""
    required_dirs = [
        'src/pof',
        'src/solver',
        'src/problems',
        'src/benchmark',
        'src/cli',
        'config',
        'tests',
        'docs'
    ]

    all_ok = True
    for dir_path in required_dirs:
        path = Path(dir_path)
        if path.exists():
            print(f"✓ {dir_path}/")
        else:
            print(f"✗ {dir_path}/ - missing")
            all_ok = False

    return all_ok


def check_config():
    """Check that the config file exists and parses."""
    config_path = Path('config/config.yaml')
    if not config_path.exists():
        print("✗ config/config.yaml - missing")
        return False
    try:
        import yaml
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
        missing = [s for s in ('solver', 'poll_radius', 'benchmark', 'logging') if s not in config]
    except Exception as e:
        print(f"✗ config/config.yaml - unreadable ({e})")
        return False
    if missing:
        print(f"✗ config/config.yaml - missing sections: {', '.join(missing)}")
        return False
    print("✓ config/config.yaml")
    return True


def check_catalog():
    """Check that every problem of the catalog builds."""
    sys.path.insert(0, str(Path(__file__).parent))
    try:
        from src.problems.catalog import list_problems
        rows = list_problems()
    except Exception as e:
        print(f"✗ problem catalog - {e}")
        return False
    print(f"✓ {len(rows)} problems: {', '.join(r['id'] for r in rows)}")
    return True


def main():
    """Run all checks."""
    print("=" * 70)
    print("Partitioned DFO - Installation Check")
    print("=" * 70)
    print()

    print("Python Version:")
    python_ok = check_python_version()
    print()

    print("Required Modules:")
    modules_ok = check_modules()
    print()

    print("Project Structure:")
    dirs_ok = check_directories()
    print()

    print("Configuration:")
    config_ok = check_config()
    print()

    print("Problem Catalog:")
    catalog_ok = modules_ok and check_catalog()
    print()

    print("=" * 70)

    if python_ok and modules_ok and dirs_ok and config_ok and catalog_ok:
        print("✓ All checks passed! You're ready to go.")
        print()
        print("Next steps:")
        print("  1. Reproduce the tables: python run_reproduction.py")
        print("  2. Run a profile: python run_cli.py profile --problem heavy_mono --baseline")
        return 0
    else:
        print("✗ Some checks failed. Please fix the issues above.")
        print()
        print("Try running:")
        print("  pip install -r requirements.txt")
        return 1


if __name__ == "__main__":
    sys.exit(main())
