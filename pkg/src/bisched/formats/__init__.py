from __future__ import annotations

from bisched.formats.instance_json import parse_instance, serialize_instance
from bisched.formats.schedule_json import parse_schedule, serialize_schedule

__all__ = ["parse_instance", "parse_schedule", "serialize_instance", "serialize_schedule"]
