import sys

REQUIRED_MODULES = {"dotenv", "platformdirs", "networkx", "numpy", "pandas"}


def _install_deps(project_root):
    import subprocess

    target = ".[dev]" if "--dev" in sys.argv[2:] else "."
    args = [sys.executable, "-m", "pip", "install", "-e", target]
    return subprocess.call(args, cwd=str(project_root))


def main():
    if sys.version_info < (3, 12):
        sys.stderr.write("bisched требует Python 3.12+\nЗапуск: python3.12 start.py <команда>\n")
        raise SystemExit(1)

    from pathlib import Path

    project_root = Path(__file__).resolve().parent

    if len(sys.argv) >= 2 and sys.argv[1] == "install-deps":
        raise SystemExit(_install_deps(project_root))

    src_path = str(project_root / "src")
    if src_path not in sys.path:
        sys.path.insert(0, src_path)

    try:
        from bisched.cli import main as cli_main
    except ModuleNotFoundError as exc:
        if exc.name in REQUIRED_MODULES:
            sys.stderr.write(
                "Не установлены зависимости проекта.\n"
                "Установите их командой:\n"
                "  python3.12 start.py install-deps\n"
            )
            raise SystemExit(1) from exc
        raise

    cli_main()


if __name__ == "__main__":
    main()
