# Subcommand modules; each one registers itself through setup(subparsers).
