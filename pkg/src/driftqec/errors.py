"""Error taxonomy shared across modules.

ConfigError marks bad inputs or configuration (CLI exit code 2);
NumericalError marks failures of the numerics themselves (exit code 3).
Plain ValueError from argument validation is treated like ConfigError.
"""


class ConfigError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass
