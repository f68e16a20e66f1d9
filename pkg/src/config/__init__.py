"""Toolkit configuration (environment-driven constants)"""
from .app_config import *
