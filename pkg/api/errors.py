"""
Shared exception root for molroots services
Each service package derives its own error family from MolRootsError
"""


class MolRootsError(Exception):
    """Base exception for every domain error raised by the api package"""
    pass


class ConfigError(MolRootsError):
    """Unreadable configuration file, unknown key or bad value"""
    pass


class ReferenceDataError(MolRootsError):
    """Embedded reference data is missing or fails its checksum"""
    pass
