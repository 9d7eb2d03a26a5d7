"""Concentration-biofeedback engine: gaze-gated EEG alpha drives a governed pull."""

__version__ = "0.1.0"
