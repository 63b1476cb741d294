import threading
from typing import Any, Dict, List


class ReportStore:
    """Analysis results kept per context id, shared between the pipeline thread and the HTTP handlers."""

    def __init__(self):
        self.store: Dict[str, Dict[str, Any]] = {}
        self._lock = threading.Lock()

    def update(self, context_id: str, new_data: Dict[str, Any]) -> None:
        """
        Merge new_data into the entry of context_id.
        :param context_id: analysis run identifier
        :param new_data: fields to add or overwrite
        """
        with self._lock:
            self.store.setdefault(context_id, {}).update(new_data)

    def get(self, context_id: str) -> Dict[str, Any]:
        """
        :param context_id: analysis run identifier
        :return: a copy of the entry, {} when unknown
        """
        with self._lock:
            return dict(self.store.get(context_id, {}))

    def contexts(self) -> List[str]:
        with self._lock:
            return sorted(self.store)
