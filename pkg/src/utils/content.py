import json
import logging
import os
from functools import lru_cache
from typing import Any, Dict

logger = logging.getLogger(__name__)

RESOURCES_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "resources")


def resource_path(*parts: str) -> str:
    return os.path.join(RESOURCES_PATH, *parts)


def resolve_resource(name: str, folder: str, extension: str) -> str:
    """A path as given when it exists, otherwise the bundled resource of that name."""
    if os.path.isfile(name):
        return name
    candidates = [resource_path(folder, name), resource_path(name)]
    if not name.endswith(extension):
        candidates.insert(1, resource_path(folder, f"{name}{extension}"))
    for candidate in candidates:
        if os.path.isfile(candidate):
            return candidate
    raise FileNotFoundError(f"No such file or bundled {folder} resource: {name}")


@lru_cache(maxsize=None)
def load_content(name: str = "main_content.json") -> Dict[str, Any]:
    json_path = resource_path("content", name)
    with open(json_path, "r", encoding="utf-8") as f:
        data = json.load(f)
    logger.debug(f"Loaded content {json_path}")
    return data


def load_defaults() -> Dict[str, Any]:
    return dict(load_content("defaults.json"))
