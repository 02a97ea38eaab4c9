"""Exception hierarchy. Each error carries a category that maps to a CLI exit code."""


class WalkLabError(Exception):
    category = "numerical"


class ConfigError(WalkLabError):
    category = "config"


class BadNorm(ConfigError):
    pass


class BadRange(ConfigError):
    pass


class DirectBackendTooLarge(ConfigError):
    pass


class NotHermitian(WalkLabError):
    pass


class NoConvergence(WalkLabError):
    pass


class NotDensity(WalkLabError):
    pass


class BasisMismatch(WalkLabError):
    pass


class TooLarge(WalkLabError):
    pass


class DiagonalOnlyStored(WalkLabError):
    pass


class HorizonTooShort(WalkLabError):
    category = "horizon"


EXIT_CODES = {"config": 2, "numerical": 3, "horizon": 4}


def exit_code_for(category: str) -> int:
    return EXIT_CODES.get(category, 3)
