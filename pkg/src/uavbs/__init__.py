"""Multi-UAV 60 GHz base-station simulator with CommNet/DNN actor-critic training."""

__version__ = "0.1.0"
