from .textformat import iter_records, parse_int, parse_key_values, parse_value

__all__ = ["iter_records", "parse_int", "parse_key_values", "parse_value"]
