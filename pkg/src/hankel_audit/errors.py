class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on.

    ``param`` names the offending argument so front ends can point at the
    flag or field that caused it.
    """

    def __init__(self, param: str, message: str):
        super().__init__(f"{param}: {message}")
        self.param = param
