# Archivo para hacer que routes sea un paquete Python
