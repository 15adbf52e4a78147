"""
Acceptance checks and process resource reporting
"""

from .acceptance import AcceptanceCheck, AcceptanceSuite, ProcessResourceMonitor, ResourceInfo

__all__ = ["AcceptanceCheck", "AcceptanceSuite", "ProcessResourceMonitor", "ResourceInfo"]
