"""Top-level package for fuscoh."""
# fuscoh/__init__.py

__app_name__ = "fuscoh"
__version__ = "0.3.0"

(
    SUCCESS,
    VERIFICATION_FAILURE,
    INPUT_ERROR,
    RESOURCE_CAP,
) = range(4)

ERRORS = {
    VERIFICATION_FAILURE: "verification failure",
    INPUT_ERROR: "input error",
    RESOURCE_CAP: "resource cap exceeded",
}
