"""
In-memory storage for datasets and reports produced during a session
"""

from typing import Any, Dict, Generic, Optional, TypeVar

T = TypeVar("T")


class ResultStorage(Generic[T]):
    """
    Named in-memory store with the lookup-or-error helper used by every service.
    """

    def __init__(self, not_found_template: str):
        """
        Initialize ResultStorage.

        Args:
            not_found_template: Error template with {name} and {available} fields
        """
        self._storage: Dict[str, T] = {}
        self._not_found_template = not_found_template

    def add(self, name: str, item: T) -> None:
        """Add or replace an item."""
        self._storage[name] = item

    def get(self, name: str) -> Optional[T]:
        return self._storage.get(name)

    def list_all(self) -> Dict[str, T]:
        return self._storage

    def get_available(self) -> str:
        """Comma-separated sorted names, or 'none' if empty."""
        if not self._storage:
            return "none"
        return ", ".join(sorted(self._storage.keys()))

    def get_or_error(self, name: str) -> tuple[Optional[T], Optional[Dict[str, Any]]]:
        """
        Get an item or return an error response.

        Returns:
            Tuple of (item, error_dict)
            If found: (item, None)
            If not found: (None, error_dict)
        """
        if name not in self._storage:
            return None, {
                "error": True,
                "message": self._not_found_template.format(name=name, available=self.get_available()),
            }
        return self._storage[name], None
