"""Tandem queues with identical service times: exact plateau simulation, heavy-traffic
scaling and the explicit limit law of the time-changed plateau."""

__version__ = "0.1.0"
