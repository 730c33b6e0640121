"""Apply the owning kit's arithmetic settings around a service call"""

import functools
from typing import Any, Callable, TypeVar, cast

F = TypeVar("F", bound=Callable[..., Any])


def scoped(method: F) -> F:
    """Run ``method`` under ``self.kit.scope()``"""

    @functools.wraps(method)
    def wrapper(self: Any, *args: Any, **kwargs: Any) -> Any:
        with self.kit.scope():
            return method(self, *args, **kwargs)

    return cast(F, wrapper)
