class QubathError(Exception):
    """Base class for errors raised by the library; the CLI reports these as diagnostics."""


class InvalidSpinError(QubathError):

    def __init__(self, value) -> None:
        super().__init__(f"Invalid spin magnitude {value}: 2S must be a positive integer.")
        self.value = value


class InvalidQuantumNumberError(QubathError):

    def __init__(self, value, reason: str) -> None:
        super().__init__(f"Invalid quantum number {value}: {reason}.")
        self.value = value
        self.reason = reason


class MismatchedSpinError(QubathError):

    def __init__(self, first, second) -> None:
        super().__init__(f"Cannot combine tables built for different spins: S={first} and S={second}.")
        self.first = first
        self.second = second


class EnumerationLimitError(QubathError):

    def __init__(self, states: int, limit: int) -> None:
        super().__init__(f"Cannot enumerate {states} product states, the limit is {limit}.")
        self.states = states
        self.limit = limit


class TermBudgetError(QubathError):

    def __init__(self, terms: int, budget: int) -> None:
        super().__init__(f"The sum needs {terms} terms, the budget is {budget}.")
        self.terms = terms
        self.budget = budget


class QuadratureError(QubathError):

    def __init__(self, estimate, error: float, where: str = "") -> None:
        location = f" at {where}" if where else ""
        super().__init__(f"Quadrature did not converge{location}: estimate {estimate}, error {error:.3e}.")
        self.estimate = estimate
        self.error = error
        self.where = where


class DivergentExpectationError(QubathError):

    def __init__(self, cutoff: float, tail: float) -> None:
        super().__init__(f"Expectation value diverges: integrand tail {tail:.3e} at j={cutoff:.6g} does not vanish.")
        self.cutoff = cutoff
        self.tail = tail


class InvalidDensityMatrixError(QubathError):

    def __init__(self, reason: str) -> None:
        super().__init__(f"Invalid initial density matrix: {reason}.")
        self.reason = reason


class InvalidParameterError(QubathError):

    def __init__(self, name: str, value, requirement: str) -> None:
        super().__init__(f"Invalid parameter {name}={value}: {requirement}.")
        self.name = name
        self.value = value
        self.requirement = requirement


class InsufficientGridError(QubathError):

    def __init__(self, reason: str) -> None:
        super().__init__(f"Time grid is insufficient: {reason}.")
        self.reason = reason


class TruncationLimitError(QubathError):

    def __init__(self, n_max: int, cap: int) -> None:
        super().__init__(f"Thermal sum needs {n_max} terms, the cap is {cap}; increase beta*g*S.")
        self.n_max = n_max
        self.cap = cap


class RootFindingError(QubathError):

    def __init__(self, bracket, iterations: int) -> None:
        super().__init__(f"Root finder did not converge in {iterations} iterations on bracket {bracket}.")
        self.bracket = bracket
        self.iterations = iterations


class UnsupportedSpinError(QubathError):

    def __init__(self, spin, supported) -> None:
        names = ", ".join(str(s) for s in supported)
        super().__init__(f"No closed form for S={spin}; supported values are {names}.")
        self.spin = spin
        self.supported = supported


class ZeroCrossingError(QubathError):

    def __init__(self, t: float) -> None:
        super().__init__(f"Per-site factor crosses zero at t={t:.6g}; cannot take the N-th power.")
        self.t = t


class DisorderedBathError(QubathError):

    def __init__(self, temperature: float, critical: float) -> None:
        super().__init__(f"No ordered mean-field solution at T={temperature} (T_c={critical}).")
        self.temperature = temperature
        self.critical = critical


class ConfigError(QubathError):

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
        self.message = message


class PlotError(QubathError):

    def __init__(self, reason: str) -> None:
        super().__init__(f"Cannot plot the result: {reason}.")
        self.reason = reason
