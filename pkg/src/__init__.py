# Roe 模实验室软件包
__version__ = "1.0.0"
