"""
Workers Package

Process-pool workers for long verification campaigns.
"""

from .verification_worker import CAMPAIGNS, VerificationWorker

__all__ = ["CAMPAIGNS", "VerificationWorker"]
