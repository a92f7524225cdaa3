"""Multi-device continuous authentication toolkit.

Subpackages:
    events    raw event model, synthetic generator, replay, log files
    features  per-minute single-device feature vectors
    pipeline  dataset construction: encoding, selection, fusion, windows
    models    from-scratch classifier suite, metrics, search
    service   HTTP scoring and policy service
    cli       operator command line
"""

__version__ = "0.1.0"
