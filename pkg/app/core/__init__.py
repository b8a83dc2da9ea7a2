# Archivo para hacer que core sea un paquete Python
