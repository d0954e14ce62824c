from typing import Any, Callable, TypeVar

FuncType = Callable[..., Any]
F = TypeVar("F", bound=FuncType)

# Parameter descriptions shared by several public functions. Use them through
# @doc_format(), e.g. ``{epsilon}`` inside a docstring.
SHARED_PARAMS = {
    "epsilon": """The parameter of the deviation ``D(x, y) = (x + epsilon)(y - x)``.
        Must be finite and at least 1.""",
    "weights": """Non-negative weights, one per value (or broadcastable to the
        values). ``None`` means unit weights. At least one weight must be positive.""",
    "cfg": """Bisection settings (absolute tolerance on the output and iteration
        budget).""",
}


def doc_format(**kwargs: str) -> Callable[[F], F]:
    """
    Fill ``{name}`` placeholders in the decorated object's docstring. Shared
    parameter descriptions are always available; keyword arguments add to them.
    """
    values = {**SHARED_PARAMS, **kwargs}

    def _(func: F) -> F:
        if func.__doc__:
            func.__doc__ = func.__doc__.format(**values)
        return func

    return _
