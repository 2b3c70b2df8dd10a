from .content import load_content, load_defaults, resource_path, resolve_resource
