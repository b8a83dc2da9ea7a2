# Archivo para hacer que app sea un paquete Python
