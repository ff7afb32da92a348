"""
Parse utility functions for rsdr command-line values.
"""

from ..errors import InputError, ParameterError


class Parsers:
    """Parse utility functions (static methods)"""

    @staticmethod
    def parse_alpha(text):
        """Convert an alpha string to a float in (0, 2) or the literal "cv" """
        value = str(text).strip().lower()
        if value == "cv":
            return "cv"
        try:
            alpha = float(value)
        except ValueError:
            raise ParameterError("alpha must be a number or 'cv', got %r" % text)
        if not 0.0 < alpha < 2.0:
            raise ParameterError("alpha must lie in (0, 2), got %r" % text)
        return alpha

    @staticmethod
    def parse_alpha_list(text):
        """Comma-separated alphas, e.g. "0.5,1" or "cv,1" """
        items = [item for item in str(text).split(",") if item.strip()]
        if not items:
            raise ParameterError("Empty alpha list")
        return [Parsers.parse_alpha(item) for item in items]

    @staticmethod
    def parse_response(text):
        """
        Response column selector.

        None selects the last column; an integer string selects by position
        (negative values count from the end); anything else is a column name.
        """
        if text is None:
            return None
        value = str(text).strip()
        try:
            return int(value)
        except ValueError:
            return value

    @staticmethod
    def parse_config_file(path):
        """
        Read a flat `key = value` file into a dict keyed by field name.

        Keys are long-flag names ("max-iter" or "max_iter"); blank lines and
        lines starting with '#' are ignored.
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except OSError as e:
            raise InputError("Cannot read config file %s: %s" % (path, e))

        values = {}
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError("%s:%d: expected 'key = value', got %r" % (path, lineno, line))
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if not key:
                raise InputError("%s:%d: empty key" % (path, lineno))
            values[key] = value
        return values
